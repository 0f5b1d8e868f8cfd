#include "thermograph/error.hpp"

namespace thermograph {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::all_boundary: return "AllBoundary";
    case Errc::degenerate_sites: return "DegenerateSites";
    case Errc::separation_unachievable: return "SeparationUnachievable";
    case Errc::non_finite_field: return "NonFiniteField";
    case Errc::negative_temperature: return "NegativeTemperature";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::interior_disconnected: return "InteriorDisconnected";
    case Errc::singular_system: return "SingularSystem";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

}  // namespace thermograph
