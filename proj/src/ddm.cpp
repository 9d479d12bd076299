#include "dnorm/ddm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dnorm {
namespace {

template <typename Better>
NormalMap select_neighbor(const NormalMap& normals, const ScalarField& score, Better better) {
  if (!normals.same_shape(score)) throw std::invalid_argument("selection: normals and score differ in shape");
  NormalMap out = normals;
  const int w = normals.width();
  const int h = normals.height();
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!normals.valid(u, v)) continue;
      bool have = score.valid(u, v);
      double best = have ? score(u, v) : 0.0;
      Vec3 chosen = normals(u, v);
      for (const auto& off : kNeighborOffsets) {
        const int nu = u + off[0];
        const int nv = v + off[1];
        if (!normals.contains(nu, nv) || !normals.valid(nu, nv) || !score.valid(nu, nv)) continue;
        const double s = score(nu, nv);
        if (!have || better(s, best)) {
          have = true;
          best = s;
          chosen = normals(nu, nv);
        }
      }
      out(u, v) = chosen;
    }
  }
  return out;
}

double chord(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Per-pixel edge ingredients; both default to "edge off".
struct EdgeTerms {
  std::vector<double> k;  // curvature, 0 where unknown
  std::vector<double> w;  // 1 - rho, 0 where unknown
};

EdgeTerms edge_terms(const NormalMap& normals, const ScalarField& k, const ScalarField& tau, const ScalarField& eps,
                     CorrelationCombine combine) {
  EdgeTerms t{std::vector<double>(normals.size(), 0.0), std::vector<double>(normals.size(), 0.0)};
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (k.valid_at(i)) t.k[i] = k.values()[i];
    const bool ht = tau.valid_at(i) && combine != CorrelationCombine::Pearson;
    const bool he = eps.valid_at(i) && combine != CorrelationCombine::Kendall;
    if (!ht && !he) continue;
    double rho = 0.0;
    if (ht) rho = tau.values()[i];
    if (he) rho = ht ? std::max(rho, eps.values()[i]) : eps.values()[i];
    t.w[i] = 1.0 - rho;
  }
  return t;
}

class Icm {
 public:
  Icm(const NormalMap& observed, const EdgeTerms& terms, const CrfConfig& cfg)
      : obs_(observed), terms_(terms), cfg_(cfg), w_(observed.width()), h_(observed.height()) {}

  // Symmetric coupling of q and its neighbor p: both directed edge terms.
  double coupling(std::size_t q, std::size_t p) const {
    return cfg_.lambda / kNeighborCount * (terms_.k[q] * terms_.w[p] + terms_.k[p] * terms_.w[q]);
  }

  double total_energy(const NormalMap& labels) const {
    double e = 0.0;
    for (int v = 0; v < h_; ++v) {
      for (int u = 0; u < w_; ++u) {
        if (!obs_.valid(u, v)) continue;
        const std::size_t q = obs_.index(u, v);
        e += cfg_.sigma * chord(obs_.values()[q], labels.values()[q]);
        // Each undirected edge once: E, SW, S, SE.
        for (int i = 4; i < kNeighborCount; ++i) {
          const int nu = u + kNeighborOffsets[i][0];
          const int nv = v + kNeighborOffsets[i][1];
          if (!obs_.contains(nu, nv) || !obs_.valid(nu, nv)) continue;
          const std::size_t p = obs_.index(nu, nv);
          e += coupling(q, p) * chord(labels.values()[p], labels.values()[q]);
        }
      }
    }
    return e;
  }

  CrfResult run() {
    CrfResult res{obs_, {}};
    NormalMap& labels = res.normals;
    res.report.energies.push_back(total_energy(labels));

    // changed_[i]: tick of the last label change; seen_[i]: tick at which
    // pixel i last computed its best move. A pixel whose blanket has not
    // changed since then would make the same choice again and is skipped.
    changed_.assign(labels.size(), 0);
    seen_.assign(labels.size(), -1);
    long tick = 0;

    const double tol = cfg_.tolerance_deg * std::numbers::pi / 180.0;
    for (int sweep = 0; sweep < cfg_.max_sweeps; ++sweep) {
      double max_rotation = 0.0;
      for (int phase = 0; phase < 4; ++phase) {
        ++tick;
        const int pu = phase & 1;
        const int pv = phase >> 1;
        for (int v = pv; v < h_; v += 2) {
          for (int u = pu; u < w_; u += 2) {
            if (!obs_.valid(u, v)) continue;
            const std::size_t q = obs_.index(u, v);
            if (!dirty(u, v, q)) continue;
            seen_[q] = tick;
            const Vec3 before = labels.values()[q];
            const Vec3 after = best_label(labels, u, v, q);
            if (after == before) continue;
            labels.values()[q] = after;
            changed_[q] = tick;
            max_rotation = std::max(max_rotation, angle_between(before, after));
          }
        }
      }
      res.report.sweeps = sweep + 1;
      res.report.energies.push_back(total_energy(labels));
      if (max_rotation < tol) {
        res.report.converged = true;
        break;
      }
    }
    return res;
  }

 private:
  bool dirty(int u, int v, std::size_t q) const {
    if (seen_[q] < 0 || changed_[q] > seen_[q]) return true;
    for (const auto& off : kNeighborOffsets) {
      const int nu = u + off[0];
      const int nv = v + off[1];
      if (!obs_.contains(nu, nv)) continue;
      if (changed_[obs_.index(nu, nv)] > seen_[q]) return true;
    }
    return false;
  }

  Vec3 best_label(const NormalMap& labels, int u, int v, std::size_t q) const {
    std::array<std::size_t, kNeighborCount> nbr{};
    std::array<double, kNeighborCount> wt{};
    int n = 0;
    for (const auto& off : kNeighborOffsets) {
      const int nu = u + off[0];
      const int nv = v + off[1];
      if (!obs_.contains(nu, nv) || !obs_.valid(nu, nv)) continue;
      const std::size_t p = obs_.index(nu, nv);
      nbr[static_cast<std::size_t>(n)] = p;
      wt[static_cast<std::size_t>(n)] = coupling(q, p);
      ++n;
    }
    const Vec3& obs = obs_.values()[q];
    auto local = [&](const Vec3& c) {
      double e = cfg_.sigma * chord(obs, c);
      for (int j = 0; j < n; ++j) {
        const double wj = wt[static_cast<std::size_t>(j)];
        if (wj != 0.0) e += wj * chord(labels.values()[nbr[static_cast<std::size_t>(j)]], c);
      }
      return e;
    };

    Vec3 best = labels.values()[q];
    double best_e = local(best);
    for (int j = 0; j < n; ++j) {
      const Vec3& c = labels.values()[nbr[static_cast<std::size_t>(j)]];
      if (c == best) continue;
      const double e = local(c);
      if (e < best_e) {
        best_e = e;
        best = c;
      }
    }
    return best;
  }

  const NormalMap& obs_;
  const EdgeTerms& terms_;
  const CrfConfig& cfg_;
  int w_;
  int h_;
  std::vector<long> changed_;
  std::vector<long> seen_;
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

NormalMap select_by_curvature(const NormalMap& normals, const ScalarField& k) {
  return select_neighbor(normals, k, [](double a, double b) { return a < b; });
}

NormalMap select_by_correlation(const NormalMap& normals, const ScalarField& coeff) {
  return select_neighbor(normals, coeff, [](double a, double b) { return a > b; });
}

void CrfConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("crf: sigma must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("crf: lambda must be finite and >= 0");
  if (max_sweeps < 1) throw std::invalid_argument("crf: max_sweeps must be >= 1");
  if (!(tolerance_deg >= 0.0)) throw std::invalid_argument("crf: tolerance must be >= 0");
}

CrfResult crf_refine(const NormalMap& normals, const ScalarField& k, const ScalarField& tau, const ScalarField& eps,
                     const CrfConfig& cfg) {
  cfg.validate();
  if (!normals.same_shape(k) || !normals.same_shape(tau) || !normals.same_shape(eps)) {
    throw std::invalid_argument("crf_refine: input fields differ in shape");
  }
  const EdgeTerms terms = edge_terms(normals, k, tau, eps, cfg.combine);
  return Icm(normals, terms, cfg).run();
}

PlusResult estimate_3f2n_plus(const DepthImage& img, const CameraIntrinsics& K, const PlusConfig& cfg) {
  PlusResult res;
  SneConfig sne = cfg.sne;
  sne.method = SneMethod::ThreeF2N;

  auto t = std::chrono::steady_clock::now();
  NormalMap initial = estimate_3f2n(img, K, sne);
  res.stage_ms.emplace_back("3f2n", elapsed_ms(t));

  t = std::chrono::steady_clock::now();
  const CurvatureField k = curvature_field(img, K, cfg.curvature);
  res.stage_ms.emplace_back("curvature", elapsed_ms(t));

  t = std::chrono::steady_clock::now();
  const ScalarField tau = kendall_field(img);
  const ScalarField eps = pearson_field(img, cfg.pairing);
  res.stage_ms.emplace_back("correlation", elapsed_ms(t));

  t = std::chrono::steady_clock::now();
  CrfResult refined = crf_refine(initial, k.value, tau, eps, cfg.crf);
  res.stage_ms.emplace_back("crf", elapsed_ms(t));

  res.normals = std::move(refined.normals);
  res.crf = std::move(refined.report);
  return res;
}

std::string_view to_string(CorrelationCombine combine) {
  switch (combine) {
    case CorrelationCombine::Max: return "max";
    case CorrelationCombine::Kendall: return "kendall";
    case CorrelationCombine::Pearson: return "pearson";
  }
  return "?";
}

CorrelationCombine parse_combine(std::string_view name) {
  for (auto c : {CorrelationCombine::Max, CorrelationCombine::Kendall, CorrelationCombine::Pearson}) {
    if (name == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown correlation combine '" + std::string(name) + "'");
}

}  // namespace dnorm
