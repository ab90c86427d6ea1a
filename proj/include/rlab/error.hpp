#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rlab {

enum class Errc {
  bad_params,
  bad_index,
  not_regular,
  not_simple,
  rejection_budget_exceeded,
  edge_missing,
  vertices_not_distinct,
  would_create_multi_edge,
  no_edges_outside,
  internal_inconsistency,
  dense_cap_exceeded,
  no_convergence,
  singular_system,
  on_support,
  missing_anc,
  vectors_missing,
  no_switch_applied,
  no_root,
  offsets_too_large,
  empty,
  io_error,
  parse_error,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::bad_params: return "BadParams";
    case Errc::bad_index: return "BadIndex";
    case Errc::not_regular: return "NotRegular";
    case Errc::not_simple: return "NotSimple";
    case Errc::rejection_budget_exceeded: return "RejectionBudgetExceeded";
    case Errc::edge_missing: return "EdgeMissing";
    case Errc::vertices_not_distinct: return "VerticesNotDistinct";
    case Errc::would_create_multi_edge: return "WouldCreateMultiEdge";
    case Errc::no_edges_outside: return "NoEdgesOutside";
    case Errc::internal_inconsistency: return "InternalInconsistency";
    case Errc::dense_cap_exceeded: return "DenseCapExceeded";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::singular_system: return "SingularSystem";
    case Errc::on_support: return "OnSupport";
    case Errc::missing_anc: return "MissingAnc";
    case Errc::vectors_missing: return "VectorsMissing";
    case Errc::no_switch_applied: return "NoSwitchApplied";
    case Errc::no_root: return "NoRoot";
    case Errc::offsets_too_large: return "OffsetsTooLarge";
    case Errc::empty: return "Empty";
    case Errc::io_error: return "IoError";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an `Error` carrying a
/// machine-checkable code; the message is for humans only.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace rlab
