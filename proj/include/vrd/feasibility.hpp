#pragma once

#include <string>
#include <vector>

#include "vrd/model.hpp"

namespace vrd {

enum class Verdict { Feasible, Inconsistent, Infeasible };

/// Rule identifiers, in checking order.
enum class Rule {
    Structure,        // malformed tour (wrong vehicle counts, bad lengths)
    NodeVisit,        // (a) who may visit a package node
    DepotTermination, // (b) tours end at the depot and never pass it mid-tour
    Coverage,         // (c) every package is visited
    FlightLength,     // (d) at most two consecutive flying edges, flight within range
    CarryConsistency, // (e) truck and drone annotations agree
    ScheduleConsistency,
};

std::string_view rule_name(Rule r);

struct Violation {
    Rule rule;
    std::string locus;
};

struct FeasibilityReport {
    Verdict verdict = Verdict::Feasible;
    std::vector<Violation> violations;

    bool feasible() const { return verdict == Verdict::Feasible; }
    std::string render() const;
};

/// Thrown by the consistency checkers when called on a solution that is not almost feasible.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Everything except schedule consistency. Verdict is Feasible or Infeasible.
FeasibilityReport check_almost_feasible(const Solution& s, const Instance& inst);

struct MarkingTrace {
    bool complete = false;
    std::vector<std::size_t> marked_per_round;  // cumulative count after each round
};

/// Fixpoint marking over essentially-equal classes. Round 0 marks every edge leaving the depot.
MarkingTrace run_marking(const Solution& s, int n_p);

/// True iff the marking reaches every edge.
bool check_schedule_consistency_marking(const Solution& s, int n_p);

/// True iff every depot-avoiding cycle of the graph contains a flip.
bool check_flip_cycles(const SolutionGraph& g);

/// Almost feasibility followed by the marking check.
FeasibilityReport check_feasible(const Solution& s, const Instance& inst);

}  // namespace vrd
