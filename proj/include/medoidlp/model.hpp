#ifndef MEDOIDLP_MODEL_HPP
#define MEDOIDLP_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace medoidlp {

/// Radial law for drawing a point's distance to its ball center.
///   uniform_ball : Prob(r <= t) = t^d   (uniform over the ball, "Case 1")
///   quadratic_cdf: Prob(r <= t) = t^2   (survival exactly 1 - t^2, "Case 2")
enum class RadialLaw { uniform_ball = 1, quadratic_cdf = 2 };

enum class CenterLayout { simplex, line };

/// Dissimilarity measure applied to pairwise Euclidean distances.
struct Metric {
    enum class Kind { squared_euclidean, euclidean, power };
    Kind kind = Kind::squared_euclidean;
    double exponent = 2.0; // only meaningful for Kind::power

    static Metric squared() { return {Kind::squared_euclidean, 2.0}; }
    static Metric euclidean() { return {Kind::euclidean, 1.0}; }
    static Metric power(double p);

    double apply(double distance) const;
    std::string tag() const;
    static Metric from_tag(const std::string& tag);
};

/// Labeled points in d-dimensional Euclidean space with ground-truth ball
/// membership. Storage is row-major: point i occupies xs[i*dim .. i*dim+dim).
struct PointSet {
    int dim = 0;
    std::vector<double> xs;
    std::vector<int> ball_of;
    std::vector<double> centers; // row-major, one row per ball

    int size() const { return dim == 0 ? 0 : static_cast<int>(xs.size()) / dim; }
    int ball_count() const { return dim == 0 ? 0 : static_cast<int>(centers.size()) / dim; }
    const double* point(int i) const { return xs.data() + static_cast<std::size_t>(i) * dim; }
    const double* center(int b) const { return centers.data() + static_cast<std::size_t>(b) * dim; }
};

/// Symmetric nonnegative weights w_ij with zero diagonal.
struct DissimilarityMatrix {
    int n = 0;
    std::vector<double> w; // row-major n x n
    Metric metric;

    double at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return w[static_cast<std::size_t>(i) * n + j]; }
    void validate() const; // throws std::invalid_argument on violation
};

double euclidean_distance(const double* a, const double* b, int dim);

/// Ball centers with pairwise separation R.
///   simplex: all pairwise distances exactly R (requires k <= d+1)
///   line   : centers at 0, R, 2R, ... along the first axis
/// Returned row-major, k rows of d coordinates.
std::vector<double> place_ball_centers(int k, int d, double R, CenterLayout layout);

/// n isotropic samples in the unit ball around `center` (dim d), radius drawn
/// by inverse CDF of `law`, direction uniform on the sphere. Deterministic
/// for a given seed.
std::vector<double> sample_ball(const double* center, int d, int n, RadialLaw law,
                                std::uint64_t seed);

/// Full separated-balls instance: k balls, n points each. Per-ball streams are
/// derived as mix_seed(seed, ball), so ball draws are order-independent.
PointSet sample_separated_balls(int k, int d, double R, int n, RadialLaw law,
                                CenterLayout layout, std::uint64_t seed);

DissimilarityMatrix dissimilarities(const PointSet& ps, Metric metric);
DissimilarityMatrix dissimilarities_1d(const std::vector<double>& coords, Metric metric);

// CSV interchange. Points: header x0,..,x{d-1},ball then one row per point.
// Matrices: N rows of N comma-separated values, no header.
void write_points_csv(std::ostream& out, const PointSet& ps);
PointSet read_points_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const DissimilarityMatrix& m);
DissimilarityMatrix read_matrix_csv(std::istream& in);

/// Shortest round-trip decimal rendering of a double (locale-free).
std::string format_double(double v);

} // namespace medoidlp

#endif
