#include "loopsoup/winding.hpp"

#include <stdexcept>

namespace loopsoup {

WindingFieldSample field_sample(const LoopSoupSample& soup, std::span<const Cut> cuts) {
  WindingFieldSample out;
  for (const auto& cut : cuts) out.values[cut.face] = 0;
  for (const auto& loop : soup.loops)
    for (const auto& cut : cuts) out.values[cut.face] += winding_number(loop.vertices(), cut);
  return out;
}

OneForm cut_one_form(const PlanarMap& map, std::span<const Cut> cuts, std::span<const double> t) {
  if (cuts.size() != t.size()) throw std::invalid_argument("cut_one_form: one weight per cut required");
  OneForm form(map.graph());
  for (std::size_t i = 0; i < cuts.size(); ++i)
    for (const auto& e : cuts[i].edges) form.add(e.from, e.to, t[i]);
  return form;
}

std::vector<Cut> default_cuts(const PlanarMap& map, std::span<const int> faces) {
  std::vector<Cut> cuts;
  cuts.reserve(faces.size());
  for (int f : faces) cuts.push_back(build_cut(map, f));
  return cuts;
}

Complex winding_charfn_exact(const PlanarMap& map, std::span<const Cut> cuts, std::span<const double> t,
                             double lambda) {
  return exact_charfn(map.transition(), cut_one_form(map, cuts, t), 1.0, lambda);
}

Complex winding_charfn_exact(const PlanarMap& map, std::span<const int> faces, std::span<const double> t,
                             double lambda) {
  const auto cuts = default_cuts(map, faces);
  return winding_charfn_exact(map, cuts, t, lambda);
}

double covariance_kernel(const PlanarMap& map, const GreensFunction& g, const Cut& cut_f, const Cut& cut_g) {
  return clt_covariance(map.transition(), g, cut_one_form(map, cut_f), cut_one_form(map, cut_g));
}

RealMatrix covariance_matrix(const PlanarMap& map, const GreensFunction& g, std::span<const Cut> cuts) {
  const Index m = static_cast<Index>(cuts.size());
  std::vector<OneForm> forms;
  for (const auto& cut : cuts) forms.push_back(cut_one_form(map, cut));
  RealMatrix k(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = i; j < m; ++j) {
      k(i, j) = clt_covariance(map.transition(), g, forms[static_cast<std::size_t>(i)],
                               forms[static_cast<std::size_t>(j)]);
      k(j, i) = k(i, j);
    }
  return k;
}

double two_point_direct(const PlanarMap& map, const GreensFunction& g, const Cut& cut_f, const Cut& cut_g) {
  const TransitionMatrix& p = map.transition();
  double cross = 0.0;
  for (const auto& e1 : cut_f.edges) {
    const DirectedEdge f_dirs[2] = {e1, {e1.to, e1.from}};
    for (const auto& e2 : cut_g.edges) {
      const DirectedEdge g_dirs[2] = {e2, {e2.to, e2.from}};
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
          const auto& a = f_dirs[s1];
          const auto& b = g_dirs[s2];
          const double sign = (s1 == s2) ? 1.0 : -1.0;
          cross += sign * p(a.from, a.to) * g(a.to, b.from) * p(b.from, b.to) * g(b.to, a.from);
        }
    }
  }
  double shared = 0.0;
  for (const auto& e1 : cut_f.edges)
    for (const auto& e2 : cut_g.edges) {
      double sign = 0.0;
      if (e1 == e2) sign = 1.0;
      else if (e1.from == e2.to && e1.to == e2.from) sign = -1.0;
      if (sign != 0.0)
        shared += sign * (p(e1.from, e1.to) * g(e1.to, e1.from) + p(e1.to, e1.from) * g(e1.from, e1.to));
    }
  return shared + cross;
}

double two_point_symmetric(const PlanarMap& map, const GreensFunction& g, const Cut& cut_f, const Cut& cut_g) {
  const TransitionMatrix& p = map.transition();
  if (!p.is_symmetric()) throw std::invalid_argument("two_point_symmetric: P is not symmetric");
  double total = 0.0;
  for (const auto& e1 : cut_f.edges)
    for (const auto& e2 : cut_g.edges)
      total += p(e1.to, e1.from) * p(e2.to, e2.from) *
               (g(e1.to, e2.from) * g(e2.to, e1.from) - g(e1.to, e2.to) * g(e2.from, e1.from));
  return 2.0 * total;
}

namespace {

Complex log_gff_partition(const PlanarMap& map, const OneForm& form) {
  const WeightedGraph& graph = map.graph();
  double prefactor = 0.0;
  for (int x = 0; x < graph.vertex_count(); ++x)
    prefactor += 0.5 * std::log(2.0 * std::numbers::pi / graph.holding(x));
  const LogDet det = log_det_resolvent(perturbed_transition(map.transition(), form, 1.0));
  return prefactor - 0.5 * det.value();
}

}  // namespace

Complex gff_partition_ratio(const PlanarMap& map, std::span<const Cut> cuts, std::span<const double> t,
                            double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gff_partition_ratio: lambda must be > 0");
  const OneForm form = cut_one_form(map, cuts, t);
  const Complex log_ratio = log_gff_partition(map, form) - log_gff_partition(map, OneForm(map.graph()));
  return std::exp(2.0 * lambda * log_ratio);
}

Complex gff_partition_ratio(const PlanarMap& map, std::span<const int> faces, std::span<const double> t,
                            double lambda) {
  const auto cuts = default_cuts(map, faces);
  return gff_partition_ratio(map, cuts, t, lambda);
}

WindingTable::WindingTable(const PlanarMap& map, std::span<const Cut> cuts)
    : cuts_(cuts.size()), n_(map.graph().vertex_count()) {
  slot_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), -1);
  for (std::size_t c = 0; c < cuts.size(); ++c)
    for (const auto& e : cuts[c].edges) {
      for (int dir = 0; dir < 2; ++dir) {
        const int a = dir == 0 ? e.from : e.to;
        const int b = dir == 0 ? e.to : e.from;
        auto& slot = slot_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)];
        if (slot < 0) {
          slot = static_cast<int>(increments_.size());
          increments_.resize(increments_.size() + cuts_, 0);
        }
        increments_[static_cast<std::size_t>(slot) + c] += dir == 0 ? 1 : -1;
      }
    }
}

void WindingTable::accumulate(std::span<const int> loop, std::span<long> out) const {
  const std::size_t k = loop.size();
  for (std::size_t i = 0; i < k; ++i) {
    const int slot = slot_[static_cast<std::size_t>(loop[i]) * static_cast<std::size_t>(n_) +
                           static_cast<std::size_t>(loop[(i + 1) % k])];
    if (slot < 0) continue;
    for (std::size_t c = 0; c < cuts_; ++c) out[c] += increments_[static_cast<std::size_t>(slot) + c];
  }
}

}  // namespace loopsoup
