#pragma once

#include <string>

#include "fluxon/circuit/netlist.hpp"

namespace fluxon::circuit {

/// Defaults applied to junctions that omit rn= or cap=.
struct JunctionDefaults {
  double icrn_v = 0.25e-3;  ///< rn = icrn / ic
  double beta_c = 1.0;      ///< cap = beta_c * Phi0 / (2 pi ic rn^2)
};

/// Parses the line-oriented netlist grammar:
///
///   B<name> n+ n- ic=<A> [rn=<ohm>] [cap=<F>]
///   L<name> n+ n- <H>    R<name> n+ n- <ohm>    C<name> n+ n- <F>
///   K<name> L<a> L<b> <H>                       (mutual inductance M)
///   I<name> n+ n- dc <A>
///   I<name> n+ n- pulse <delay> <rise> <width> <fall> <amp>
///   I<name> n+ n- ptrain <start> <period> <count> <width> <amp>
///   I<name> n+ n- sin <offset> <amp> <freq> [delay]
///   V<name> ...                                 (as I, in volts)
///   .tran <step> <stop>
///   .print v(<node>) | phi(<junction>) | vj(<junction>) | i(<inductor>)
///   .end
///
/// Case-insensitive; '*' starts a comment line. Values take the scale suffixes
/// f p n u m k (trailing unit letters such as "pH" or "uA" are ignored).
/// Throws InputError carrying the 1-based line number.
Netlist parse_netlist(const std::string& text, const JunctionDefaults& defaults = {});

Netlist load_netlist(const std::string& path, const JunctionDefaults& defaults = {});

/// Parses one numeric token with an optional scale suffix.
double parse_value(const std::string& token);

}  // namespace fluxon::circuit
