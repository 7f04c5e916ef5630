#include "dicomo/error.hpp"

namespace dicomo {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::sum_mismatch: return "SumMismatch";
    case Errc::repair_budget_exceeded: return "RepairBudgetExceeded";
    case Errc::empty_sequence: return "EmptySequence";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::overflow: return "Overflow";
    case Errc::domain_error: return "DomainError";
    case Errc::invalid_distribution: return "InvalidDistribution";
    case Errc::zero_mean_degree: return "ZeroMeanDegree";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::critical_regime: return "CriticalRegime";
    case Errc::zero_nu: return "ZeroNu";
    case Errc::no_extinct_runs: return "NoExtinctRuns";
    case Errc::no_survivors: return "NoSurvivors";
    case Errc::start_already_paired: return "StartAlreadyPaired";
    case Errc::attempts_exhausted: return "AttemptsExhausted";
    case Errc::instance_too_large: return "InstanceTooLarge";
    case Errc::parse_error: return "ParseError";
    case Errc::unsupported: return "Unsupported";
  }
  return "Unknown";
}

} // namespace dicomo
