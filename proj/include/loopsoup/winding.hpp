#ifndef LOOPSOUP_WINDING_HPP
#define LOOPSOUP_WINDING_HPP

#include "loopsoup/loop_measure.hpp"
#include "loopsoup/planar.hpp"
#include "loopsoup/sampler.hpp"

#include <map>
#include <span>
#include <vector>

namespace loopsoup {

/// Realization face -> W_lambda(face).
struct WindingFieldSample {
  std::map<int, long> values;

  friend bool operator==(const WindingFieldSample&, const WindingFieldSample&) = default;
};

WindingFieldSample field_sample(const LoopSoupSample& soup, std::span<const Cut> cuts);

/// A^t = sum_i t_i A_{f_i}; overlapping cuts accumulate.
OneForm cut_one_form(const PlanarMap& map, std::span<const Cut> cuts, std::span<const double> t);

/// Default (breadth-first) cuts for a list of faces.
std::vector<Cut> default_cuts(const PlanarMap& map, std::span<const int> faces);

/// E[exp(i sum_j t_j W_lambda(f_j))] = (det(I - P^t)/det(I - P))^{-lambda}.
Complex winding_charfn_exact(const PlanarMap& map, std::span<const Cut> cuts, std::span<const double> t,
                             double lambda);
Complex winding_charfn_exact(const PlanarMap& map, std::span<const int> faces, std::span<const double> t,
                             double lambda);

/// Limiting covariance of W_lambda / sqrt(lambda) between two faces, the
/// polarization of sigma^2 over the unit cut one-forms:
///   K(f, g) = Tr((P.A_f.A_g) G) + Tr((P.A_f) G (P.A_g) G).
double covariance_kernel(const PlanarMap& map, const GreensFunction& g, const Cut& cut_f, const Cut& cut_g);

/// Face covariance matrix K(f_i, f_j) over the given cuts.
RealMatrix covariance_matrix(const PlanarMap& map, const GreensFunction& g, std::span<const Cut> cuts);

/// Two-point function E_{L^1}[W_1(f) W_1(g)] written edge by edge from
/// crossing counts. The cross term is
///   sum_{e1, e2} sum_{s1, s2 = +-} s1 s2 P_{e1^{s1}} G_{.,.} P_{e2^{s2}} G_{.,.}
/// with every P and G oriented along the crossing direction, and each edge
/// shared by both cuts contributes the one-point term
///   s_f s_g (P_{e-e+} G_{e+e-} + P_{e+e-} G_{e-e+}).
/// Valid for any killing; for symmetric P it reduces to two_point_symmetric
/// plus the shared-edge term.
double two_point_direct(const PlanarMap& map, const GreensFunction& g, const Cut& cut_f, const Cut& cut_g);

/// Compact form for symmetric P,
///   2 sum_{e1, e2} P_{e1+e1-} P_{e2+e2-} (G_{e1+e2-} G_{e2+e1-} - G_{e1+e2+} G_{e2-e1-}),
/// without any shared-edge term. Throws std::invalid_argument if P is not
/// symmetric.
double two_point_symmetric(const PlanarMap& map, const GreensFunction& g, const Cut& cut_f, const Cut& cut_g);

/// (Z^t_GFF / Z_GFF)^{2 lambda} with
///   Z^t_GFF = prod_x (2 pi / (kappa_x + d_x))^{1/2} det(I - P^t)^{-1/2}.
Complex gff_partition_ratio(const PlanarMap& map, std::span<const Cut> cuts, std::span<const double> t,
                            double lambda);
Complex gff_partition_ratio(const PlanarMap& map, std::span<const int> faces, std::span<const double> t,
                            double lambda);

/// Per-directed-edge winding increments for a fixed list of cuts, so the
/// winding vector of a loop costs one table lookup per step.
class WindingTable {
 public:
  WindingTable(const PlanarMap& map, std::span<const Cut> cuts);

  int face_count() const { return static_cast<int>(cuts_); }
  /// Adds the winding numbers of the closed walk to out[0..face_count()).
  void accumulate(std::span<const int> loop, std::span<long> out) const;

 private:
  std::size_t cuts_;
  int n_;
  // (from * n + to) -> offset into increments_, or -1.
  std::vector<int> slot_;
  std::vector<int> increments_;
};

}  // namespace loopsoup

#endif  // LOOPSOUP_WINDING_HPP
