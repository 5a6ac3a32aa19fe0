#ifndef MEDOIDLP_CERTIFICATES_HPP
#define MEDOIDLP_CERTIFICATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "medoidlp/kmedoids.hpp"
#include "medoidlp/model.hpp"

namespace medoidlp {

enum class CertificateKind { prop1, cor2, cor3, cor4 };

std::string certificate_name(CertificateKind k);

struct CertificateWitness {
    double u = 0.0;
    std::vector<double> lambda;
};

/// Outcome of one dual-certificate check. `margin` is the minimum slack
/// across the certificate's strict inequalities (negative when violated);
/// `holds` means margin clears the strictness tolerance (1e-9). `worst`
/// records the indices of the binding or violating inequality: depending on
/// the certificate these are a point index i, a non-medoid column j, and a
/// partner index l (unused slots are -1).
struct CertificateReport {
    CertificateKind kind = CertificateKind::prop1;
    bool holds = false;
    double margin = 0.0;
    std::optional<CertificateWitness> witness;
    struct {
        int i = -1, j = -1, l = -1;
    } worst;
};

/// Exact (necessary and sufficient) check: maximizes the common slack gamma
/// of the strict dual system over (u, lambda). Positive optimum certifies
/// that the relaxation's optimum is unique, integral, and equal to the given
/// clustering; nonpositive refutes it.
CertificateReport check_dual_certificate(const DissimilarityMatrix& w, const Clustering& c);

/// Sufficient check with the democratic multipliers lambda_i = u / N_i:
/// holds iff some u in (0, U_max) satisfies f(u) < u, decided exactly by a
/// breakpoint scan plus per-column sublevel-interval intersection.
CertificateReport check_democratic_certificate(const DissimilarityMatrix& w, const Clustering& c);

/// Size-scaled thresholding check: every inter-cluster N_i (w_ij - w_iM(i))
/// must exceed every intra-cluster one.
CertificateReport check_threshold_certificate(const DissimilarityMatrix& w, const Clustering& c);

/// Large-u check (recovery beyond the thresholding barrier): u is pinned to
/// the largest intra-cluster breakpoint. Requires k >= 2.
CertificateReport check_max_u_certificate(const DissimilarityMatrix& w, const Clustering& c);

/// Separation beyond which the thresholding certificate is guaranteed for
/// power-p dissimilarities on unit balls: 2 (1 + (1 + n_max/n_min)^{1/p}).
double threshold_separation_bound(int n_max, int n_min, double p);

std::string certificate_to_json(const CertificateReport& rep);

} // namespace medoidlp

#endif
