#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "saft/errors.hpp"

namespace saft {

using PropertyList = std::vector<std::pair<std::string, std::string>>;

std::optional<std::string> find_property(const PropertyList& props, std::string_view key);

/// Logical communication graph: components, channels, and directed
/// component<->channel connections. Channels are hyperedges — any number
/// of components may connect on either side.
struct DataflowModel {
    struct Component {
        std::string name;
        PropertyList properties;
        bool operator==(const Component&) const = default;
    };
    struct Channel {
        std::string name;
        PropertyList properties;
        bool operator==(const Channel&) const = default;
    };
    enum class Direction { Outgoing, Incoming };
    struct Connection {
        std::string component;
        std::string channel;
        Direction direction;
        bool operator==(const Connection&) const = default;
    };

    std::vector<Component> components;
    std::vector<Channel> channels;
    std::vector<Connection> connections;

    const Component* find_component(std::string_view name) const;
    const Channel* find_channel(std::string_view name) const;
    /// Components connected to a channel (either direction), document order.
    std::vector<std::string> connected_components(std::string_view channel) const;

    bool operator==(const DataflowModel&) const = default;
};

DataflowModel parse_dataflow(std::string_view text, const std::string& file = {});
std::string print_dataflow(const DataflowModel& model);

}  // namespace saft
