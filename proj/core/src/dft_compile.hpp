#pragma once

// Internal normalized form of a Dft for the quantitative engines: the
// AND+SEQ encoding is folded back into ordered gates, names become dense
// ids, and only the toplevel cone is kept.

#include <string>
#include <vector>

#include "saft/dft.hpp"

namespace saft::detail {

// Node reference: values < basic_count() index basic events, the rest
// index gates (in child-before-parent order).
struct CompiledGate {
    bool is_and = false;   // else OR
    bool ordered = false;  // PAND semantics (from an AND+SEQ pair or bare SEQ)
    int flag_slot = -1;    // ordered gates only
    std::vector<int> children;
    std::string name;
};

struct CompiledDft {
    std::vector<double> rates;        // per basic event
    std::vector<std::string> be_names;
    std::vector<CompiledGate> gates;  // topological order
    int top = -1;
    int flag_slots = 0;

    std::size_t basic_count() const { return rates.size(); }
    bool ref_is_basic(int ref) const { return ref < static_cast<int>(rates.size()); }
};

CompiledDft compile_dft(const Dft& dft);

}  // namespace saft::detail
