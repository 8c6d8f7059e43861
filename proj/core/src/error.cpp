#include "trop/error.hpp"

namespace trop {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::duplicate_arrow: return "DuplicateArrow";
    case Errc::missing_lca: return "MissingLCA";
    case Errc::size_limit: return "SizeLimit";
    case Errc::invalid_space: return "InvalidSpace";
    case Errc::mass_mismatch: return "MassMismatch";
    case Errc::not_surjective: return "NotSurjective";
    case Errc::invalid_reduction: return "InvalidReduction";
    case Errc::non_commutative: return "NonCommutative";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::zero_mass_atom: return "ZeroMassAtom";
    case Errc::inclusion_violation: return "InclusionViolation";
    case Errc::group_too_large: return "GroupTooLarge";
    case Errc::not_a_chain: return "NotAChain";
    case Errc::not_monotone: return "NotMonotone";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace trop
