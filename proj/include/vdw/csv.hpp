#pragma once

#include <ostream>

#include <vdw/thermo.hpp>

namespace vdw {

// Comment lines echoing the EoS constants at the top of every CSV.
inline void write_eos_comment(std::ostream& os, const EosParams& eos) {
    os << "# eos a=" << eos.a << " b=" << eos.b << " R=" << eos.R << " Cv=" << eos.Cv
       << " s0=" << eos.s0 << '\n';
}

}  // namespace vdw
