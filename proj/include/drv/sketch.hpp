#pragma once

// Histories rebuilt from views, and the tight replay that realizes them.

#include "drv/execution.hpp"
#include "drv/sequential_spec.hpp"
#include "drv/word.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drv
{
    // One operation as seen through the timed adversary. `key` orders
    // invocations inside a batch; views are sets of keys.
    struct SketchOp
    {
        Uid key = 0;
        int proc = 1;
        std::string inv;
        std::optional<std::string> resp;
        std::optional<std::vector<Uid>> view; // sorted; present iff resp is
    };

    struct Sketch
    {
        Word word;
        // The word is one member of an equivalence class: any reordering
        // inside an invocation or response batch gives the same precedence.
        bool representative = true;
        // Pending invocations no view contained, appended at the end.
        std::size_t unseen_pending = 0;
        std::vector<Uid> keys; // keys[i]: key of the operation of word[i]
    };

    // Distinct views in ascending containment order; for each, first the
    // invocations it adds (ascending key), then the responses of operations
    // carrying it (ascending key). Throws IncomparableViews.
    Sketch build_sketch(std::vector<SketchOp> ops, int n);

    // Word-level form: `views` maps an operation's invocation uid to its view
    // (invocation uids). Complete operations need a view.
    Sketch sketch(const Word& word, const std::map<Uid, std::vector<Uid>>& views);

    Sketch sketch(const Execution& e);

    // Pairs (a, b) of operations, named by (process, local index), with
    // a before b in x but not in s.
    struct PrecedenceViolation
    {
        std::pair<int, std::size_t> before;
        std::pair<int, std::size_t> after;
    };
    std::vector<PrecedenceViolation> precedence_violations(const Word& x, const Word& s);

    // Number of pairs of views in the execution not related by inclusion.
    std::size_t incomparable_view_pairs(const Execution& e);

    // Checks that every view contains the invocations of all operations
    // that precede its operation in x(E). Returns the number of misses.
    std::size_t views_missing_predecessors(const Execution& e);

    struct TightReplay
    {
        std::vector<int> order;
        Execution replayed;
        Sketch sketch;
        Word replay_word;
        bool indistinguishable = false;
        // x(E') equals the sketch up to the batch reorderings the sketch
        // leaves free (same process projections, same precedence).
        bool word_matches = false;
    };

    // Reorders the steps of a timed execution so that each send sits next to
    // its announce write and each receive next to its snapshot, then re-runs
    // it with the same picks and responses.
    TightReplay tight_replay(const Execution& e);

    struct LinEquivalenceReport
    {
        std::size_t faithful_runs = 0;
        std::size_t faithful_violations = 0; // faithful box, wrapped word not linearizable
        std::size_t faulty_runs = 0;
        std::size_t faulty_detected = 0;     // faulty box, tight wrapped word not linearizable
        bool holds() const { return faithful_violations == 0 && faulty_detected == faulty_runs; }
    };

    // Both directions of the link between the box and its timed wrapper,
    // sampled over seeds at desk scale.
    LinEquivalenceReport lin_equivalence_scenario(const SequentialSpec& spec, std::size_t seeds = 50,
                                                  std::size_t horizon = 240, std::size_t fault_after = 2);
} // namespace drv
