#ifndef MEDOIDLP_KMEDOIDS_HPP
#define MEDOIDLP_KMEDOIDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "medoidlp/linear_program.hpp"
#include "medoidlp/model.hpp"

namespace medoidlp {

/// A medoid set plus the induced nearest-medoid assignment. M(i) is the
/// medoid index of point i (M(i) = i for medoids), M(i,2) the second-closest
/// medoid (-1 when k = 1, where w_{i,M(i,2)} is treated as +infinity),
/// N_i the size of i's cluster.
struct Clustering {
    std::vector<int> medoids;       // sorted point indices
    std::vector<int> assign;        // i -> M(i)
    std::vector<int> second_medoid; // i -> M(i,2), -1 iff k == 1
    std::vector<int> cluster_size;  // i -> N_i

    /// Nearest-medoid assignment with ties broken to the lowest index.
    static Clustering from_medoids(const DissimilarityMatrix& w, std::vector<int> medoids);
    /// Clustering induced by an arbitrary assignment map (medoids = image).
    static Clustering from_assignment(const DissimilarityMatrix& w, std::vector<int> assign);

    int n() const { return static_cast<int>(assign.size()); }
    int k() const { return static_cast<int>(medoids.size()); }
    bool is_medoid(int i) const { return assign[i] == i; }
    double objective(const DissimilarityMatrix& w) const;
    /// Members of each cluster, in medoid order.
    std::vector<std::vector<int>> clusters() const;
    /// Ground-truth-style labels: cluster position of each point.
    std::vector<int> labels() const;
    void validate(const DissimilarityMatrix& w) const;
};

struct RelaxationResult {
    int n = 0;
    std::vector<double> z; // row-major n x n
    double objective = 0.0;
    bool integral = false;
    std::optional<Clustering> clustering; // present iff integral
    bool vertex = true;
    long lp_iterations = 0;
    int coupling_rows_used = 0; // rows active in the final working program

    double z_at(int i, int j) const { return z[static_cast<std::size_t>(i) * n + j]; }
};

struct ExactResult {
    double best_objective = 0.0;
    std::vector<std::vector<int>> optimal_medoid_sets; // each sorted; lexicographic order
    bool unique = false;
};

enum class Recovery { fractional, cluster_recovery, ball_recovery };

struct RecoveryOutcome {
    Recovery label = Recovery::fractional;
    std::vector<int> mismatched; // populated for cluster- but not ball-recovery
};

std::string recovery_name(Recovery r);

/// The full relaxation as an explicit program: N^2 variables z_ij >= 0,
/// N row-sum equalities, one diagonal budget row, N(N-1) coupling rows
/// z_ij <= z_jj (i != j). Variables are named z{i}_{j}.
LinearProgram build_linkmed(const DissimilarityMatrix& w, int k);

struct SolveLinkmedOptions {
    double integrality_tol = 1e-6;
    // Coupling rows are activated lazily: solve, add violated rows, repeat.
    // The returned vertex is optimal for the full program; every dropped row
    // is verified at the end. full_program forces all rows up front.
    bool full_program = false;
    int max_rounds = 400;
};

RelaxationResult solve_linkmed(const DissimilarityMatrix& w, int k,
                               const SolveLinkmedOptions& opts = {});

/// Exact KMed optimum by enumeration of all k-subsets (guarded),
/// nearest-medoid assignment, ties to the lowest index.
ExactResult brute_force_kmed(const DissimilarityMatrix& w, int k);

RecoveryOutcome classify_recovery(const RelaxationResult& rr, const std::vector<int>& ball_of);

/// Clustering induced by a ground-truth partition: each block is represented
/// by its within-block medoid (lowest index on ties).
Clustering ground_truth_clustering(const DissimilarityMatrix& w, const std::vector<int>& ball_of);

std::string relaxation_to_json(const RelaxationResult& rr, bool include_z = false);

} // namespace medoidlp

#endif
