#ifndef KGW_IO_HPP
#define KGW_IO_HPP

#include <string>

#include "kgw/states.hpp"

namespace kgw {

// Shortest text that round-trips a double (17 significant digits).
std::string format_double(double x);

// Field-mode CSV schema: header `k0,k1,k2,k3,re,im`, one row per lattice
// point carrying a nonzero coefficient. Rows whose momentum matches no
// lattice point raise OffShellSupport; malformed rows raise CsvParseError
// with the offending line number.
FieldModes load_field_modes_csv(const std::string& path, const MomentumLattice& lattice);
void save_field_modes_csv(const std::string& path, const FieldModes& modes);

} // namespace kgw

#endif
