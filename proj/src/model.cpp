#include "medoidlp/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "medoidlp/rng.hpp"

namespace medoidlp {

Metric Metric::power(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("power metric requires exponent > 0");
    return {Kind::power, p};
}

double Metric::apply(double distance) const {
    switch (kind) {
        case Kind::squared_euclidean: return distance * distance;
        case Kind::euclidean: return distance;
        case Kind::power: return std::pow(distance, exponent);
    }
    return 0.0;
}

std::string Metric::tag() const {
    switch (kind) {
        case Kind::squared_euclidean: return "sq";
        case Kind::euclidean: return "euclid";
        case Kind::power: return "pow" + format_double(exponent);
    }
    return "";
}

Metric Metric::from_tag(const std::string& tag) {
    if (tag == "sq" || tag == "squared" || tag == "squared-euclidean") return squared();
    if (tag == "euclid" || tag == "euclidean") return euclidean();
    if (tag.rfind("pow", 0) == 0) {
        double p = std::stod(tag.substr(3));
        return power(p);
    }
    throw std::invalid_argument("unknown metric tag: " + tag);
}

void DissimilarityMatrix::validate() const {
    if (n < 1 || w.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("dissimilarity matrix has inconsistent size");
    for (int i = 0; i < n; ++i) {
        if (at(i, i) != 0.0)
            throw std::invalid_argument("dissimilarity matrix diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            double v = at(i, j);
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("dissimilarity entries must be finite and nonnegative");
            if (v != at(j, i))
                throw std::invalid_argument("dissimilarity matrix must be symmetric");
        }
    }
}

double euclidean_distance(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int t = 0; t < dim; ++t) {
        double diff = a[t] - b[t];
        s += diff * diff;
    }
    return std::sqrt(s);
}

std::vector<double> place_ball_centers(int k, int d, double R, CenterLayout layout) {
    if (k < 1) throw std::invalid_argument("need at least one ball");
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
    if (!(R > 0.0)) throw std::invalid_argument("separation must be positive");

    std::vector<double> centers(static_cast<std::size_t>(k) * d, 0.0);
    if (k == 1) return centers;

    if (layout == CenterLayout::line) {
        for (int b = 0; b < k; ++b) centers[static_cast<std::size_t>(b) * d] = R * b;
        return centers;
    }

    if (k > d + 1)
        throw std::invalid_argument("simplex layout is infeasible: k > d+1 (use line layout)");

    // Regular simplex built one vertex at a time: vertex j+1 sits above the
    // centroid of the previous vertices at the height that restores edge R.
    for (int j = 1; j < k; ++j) {
        double* v = centers.data() + static_cast<std::size_t>(j) * d;
        std::vector<double> centroid(d, 0.0);
        for (int b = 0; b < j; ++b)
            for (int t = 0; t < d; ++t) centroid[t] += centers[static_cast<std::size_t>(b) * d + t];
        for (int t = 0; t < d; ++t) centroid[t] /= j;
        double rad2 = 0.0; // squared distance from centroid to each prior vertex
        for (int t = 0; t < d; ++t) {
            double diff = centroid[t] - centers[t];
            rad2 += diff * diff;
        }
        for (int t = 0; t < d; ++t) v[t] = centroid[t];
        v[j - 1] = centroid[j - 1] + std::sqrt(R * R - rad2);
    }
    return centers;
}

std::vector<double> sample_ball(const double* center, int d, int n, RadialLaw law,
                                std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one sample");
    if (d < 1) throw std::invalid_argument("invalid dimension");

    Rng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(n) * d);
    std::vector<double> dir(d);
    for (int i = 0; i < n; ++i) {
        // Isotropic direction: normalized standard Gaussian vector.
        double norm2;
        do {
            norm2 = 0.0;
            for (int t = 0; t < d; ++t) {
                dir[t] = rng.next_gaussian();
                norm2 += dir[t] * dir[t];
            }
        } while (norm2 == 0.0);
        double inv = 1.0 / std::sqrt(norm2);

        double u = rng.next_double_open_low();
        double r = (law == RadialLaw::quadratic_cdf) ? std::sqrt(u)
                                                     : std::pow(u, 1.0 / d);
        double* p = out.data() + static_cast<std::size_t>(i) * d;
        for (int t = 0; t < d; ++t) p[t] = r * inv * dir[t];
        // keep the offset inside the closed unit ball despite rounding
        double off2 = 0.0;
        for (int t = 0; t < d; ++t) off2 += p[t] * p[t];
        if (off2 > 1.0) {
            double fix = 1.0 / std::sqrt(off2);
            for (int t = 0; t < d; ++t) p[t] *= fix;
        }
        for (int t = 0; t < d; ++t) p[t] += center[t];
    }
    return out;
}

PointSet sample_separated_balls(int k, int d, double R, int n, RadialLaw law,
                                CenterLayout layout, std::uint64_t seed) {
    PointSet ps;
    ps.dim = d;
    ps.centers = place_ball_centers(k, d, R, layout);
    ps.xs.reserve(static_cast<std::size_t>(k) * n * d);
    ps.ball_of.reserve(static_cast<std::size_t>(k) * n);
    for (int b = 0; b < k; ++b) {
        auto pts = sample_ball(ps.center(b), d, n, law, mix_seed(seed, static_cast<std::uint64_t>(b)));
        ps.xs.insert(ps.xs.end(), pts.begin(), pts.end());
        ps.ball_of.insert(ps.ball_of.end(), n, b);
    }
    return ps;
}

DissimilarityMatrix dissimilarities(const PointSet& ps, Metric metric) {
    int n = ps.size();
    if (n < 2) throw std::invalid_argument("need at least two points");
    DissimilarityMatrix m;
    m.n = n;
    m.metric = metric;
    m.w.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = metric.apply(euclidean_distance(ps.point(i), ps.point(j), ps.dim));
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

DissimilarityMatrix dissimilarities_1d(const std::vector<double>& coords, Metric metric) {
    int n = static_cast<int>(coords.size());
    if (n < 2) throw std::invalid_argument("need at least two points");
    DissimilarityMatrix m;
    m.n = n;
    m.metric = metric;
    m.w.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = metric.apply(std::abs(coords[i] - coords[j]));
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_points_csv(std::ostream& out, const PointSet& ps) {
    for (int t = 0; t < ps.dim; ++t) out << 'x' << t << ',';
    out << "ball\n";
    int n = ps.size();
    for (int i = 0; i < n; ++i) {
        const double* p = ps.point(i);
        for (int t = 0; t < ps.dim; ++t) out << format_double(p[t]) << ',';
        out << ps.ball_of[i] << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double_field(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad numeric field in CSV: '" + s + "'");
    return v;
}

} // namespace

PointSet read_points_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty points CSV");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "ball")
        throw std::invalid_argument("points CSV must have header x0,..,ball");
    PointSet ps;
    ps.dim = static_cast<int>(header.size()) - 1;
    int max_ball = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::invalid_argument("points CSV row has wrong field count");
        for (int t = 0; t < ps.dim; ++t) ps.xs.push_back(parse_double_field(fields[t]));
        int b = static_cast<int>(parse_double_field(fields.back()));
        if (b < 0) throw std::invalid_argument("ball index must be nonnegative");
        ps.ball_of.push_back(b);
        max_ball = std::max(max_ball, b);
    }
    if (ps.ball_of.empty()) throw std::invalid_argument("points CSV has no rows");
    // Centers are not stored in the CSV; leave them empty (unknown).
    (void)max_ball;
    return ps;
}

void write_matrix_csv(std::ostream& out, const DissimilarityMatrix& m) {
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            if (j) out << ',';
            out << format_double(m.at(i, j));
        }
        out << '\n';
    }
}

DissimilarityMatrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto& f : fields) row.push_back(parse_double_field(f));
        rows.push_back(std::move(row));
    }
    int n = static_cast<int>(rows.size());
    if (n < 2) throw std::invalid_argument("matrix CSV needs at least 2 rows");
    DissimilarityMatrix m;
    m.n = n;
    m.w.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("matrix CSV is not square");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    m.validate();
    return m;
}

} // namespace medoidlp
