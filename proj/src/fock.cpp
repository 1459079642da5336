// Copyright 2026 The nvsqueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvsq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "nvsq/errors.hpp"

namespace nvsq::fock {

namespace {

using cd = std::complex<double>;

constexpr std::size_t kC1 = 0, kC2 = 1, kA = 2, kB = 3;

/// Accumulates complex coefficients per diagonal before packing them into
/// kernel-ready weight arrays.
class DiaBuilder {
 public:
  explicit DiaBuilder(std::size_t dimension) : dimension_(dimension) {}

  void add(std::int64_t offset, std::size_t row, cd coef) {
    if (coef == cd{}) return;
    auto [it, inserted] = diags_.try_emplace(offset);
    if (inserted) {
      it->second.re.assign(dimension_, 0.0);
      it->second.im.assign(dimension_, 0.0);
    }
    it->second.re[row] += coef.real();
    it->second.im[row] += coef.imag();
  }

  DiaOperator finish() const {
    DiaOperator op;
    op.dimension = dimension_;
    for (const auto& [offset, parts] : diags_) {
      pack(op, offset, parts.re, false);
      pack(op, offset, parts.im, true);
    }
    return op;
  }

 private:
  struct Parts {
    std::vector<double> re;
    std::vector<double> im;
  };

  static void pack(DiaOperator& op, std::int64_t offset, const std::vector<double>& c, bool imaginary) {
    std::size_t begin = 0;
    while (begin < c.size() && c[begin] == 0.0) ++begin;
    if (begin == c.size()) return;
    std::size_t end = c.size();
    while (c[end - 1] == 0.0) --end;
    DiaOperator::Diagonal d;
    d.offset = offset;
    d.begin = begin;
    d.end = end;
    d.swap = imaginary;
    d.weights.resize(2 * (end - begin));
    for (std::size_t i = begin; i < end; ++i) {
      // i·c·(x_re + i·x_im) = (−c·x_im) + i(c·x_re)
      d.weights[2 * (i - begin)] = imaginary ? -c[i] : c[i];
      d.weights[2 * (i - begin) + 1] = c[i];
    }
    op.diagonals.push_back(std::move(d));
  }

  std::size_t dimension_;
  std::map<std::int64_t, Parts> diags_;
};

struct Element {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Non-zero matrix elements of a bilinear Hamiltonian in the truncated basis.
std::vector<Element> hamiltonian_elements(const FockBasis& basis, const std::vector<Term>& terms) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    for (const Term& t : terms) {
      const int nk = basis.occupation(i, t.k);
      const int nl = basis.occupation(i, t.l);
      const auto sk = static_cast<std::int64_t>(basis.stride(t.k));
      const auto sl = static_cast<std::int64_t>(basis.stride(t.l));
      const auto row = static_cast<std::int64_t>(i);
      switch (t.kind) {
        case Term::Kind::Number:
          if (nk > 0) out.push_back({i, i, t.coef * nk});
          break;
        case Term::Kind::Hopping:
          // c_k† c_l
          if (nk >= 1 && nl + 1 < basis.cutoff(t.l))
            out.push_back({i, static_cast<std::size_t>(row - sk + sl), t.coef * std::sqrt(double(nk) * (nl + 1))});
          // c_l† c_k
          if (nl >= 1 && nk + 1 < basis.cutoff(t.k))
            out.push_back({i, static_cast<std::size_t>(row - sl + sk), t.coef * std::sqrt(double(nl) * (nk + 1))});
          break;
        case Term::Kind::Pair:
          // c_k c_l
          if (nk + 1 < basis.cutoff(t.k) && nl + 1 < basis.cutoff(t.l))
            out.push_back({i, static_cast<std::size_t>(row + sk + sl), t.coef * std::sqrt(double(nk + 1) * (nl + 1))});
          // c_k† c_l†
          if (nk >= 1 && nl >= 1)
            out.push_back({i, static_cast<std::size_t>(row - sk - sl), t.coef * std::sqrt(double(nk) * nl)});
          break;
      }
    }
  }
  return out;
}

/// Single operator used for moment extraction, real coefficients only.
DiaOperator lowering_product(const FockBasis& basis, std::size_t k, std::optional<std::size_t> l) {
  DiaBuilder b(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const int nk = basis.occupation(i, k);
    if (!l) {
      if (nk + 1 < basis.cutoff(k))
        b.add(static_cast<std::int64_t>(basis.stride(k)), i, std::sqrt(double(nk + 1)));
      continue;
    }
    if (*l == k) {
      if (nk + 2 < basis.cutoff(k))
        b.add(2 * static_cast<std::int64_t>(basis.stride(k)), i, std::sqrt(double(nk + 1) * (nk + 2)));
      continue;
    }
    const int nl = basis.occupation(i, *l);
    if (nk + 1 < basis.cutoff(k) && nl + 1 < basis.cutoff(*l)) {
      b.add(static_cast<std::int64_t>(basis.stride(k) + basis.stride(*l)), i,
            std::sqrt(double(nk + 1) * (nl + 1)));
    }
  }
  return b.finish();
}

/// c_k† c_l
DiaOperator hopping_product(const FockBasis& basis, std::size_t k, std::size_t l) {
  DiaBuilder b(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const int nk = basis.occupation(i, k);
    if (k == l) {
      b.add(0, i, double(nk));
      continue;
    }
    const int nl = basis.occupation(i, l);
    if (nk >= 1 && nl + 1 < basis.cutoff(l)) {
      const auto off = static_cast<std::int64_t>(basis.stride(l)) - static_cast<std::int64_t>(basis.stride(k));
      b.add(off, i, std::sqrt(double(nk) * (nl + 1)));
    }
  }
  return b.finish();
}

struct MomentOperators {
  std::vector<DiaOperator> lower;                 // c_k
  std::vector<std::vector<DiaOperator>> pair;     // c_k c_l, l ≥ k
  std::vector<std::vector<DiaOperator>> hop;      // c_k† c_l, l ≥ k
};

MomentOperators moment_operators(const FockBasis& basis) {
  const std::size_t n = basis.modes();
  MomentOperators ops;
  ops.pair.resize(n);
  ops.hop.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ops.lower.push_back(lowering_product(basis, k, std::nullopt));
    for (std::size_t l = k; l < n; ++l) {
      ops.pair[k].push_back(lowering_product(basis, k, l));
      ops.hop[k].push_back(hopping_product(basis, k, l));
    }
  }
  return ops;
}

/// Quadrature moments from ⟨c_k⟩, ⟨c_k c_l⟩, ⟨c_k† c_l⟩.
MomentState assemble_moments(double time, const std::vector<cd>& first, const Eigen::MatrixXcd& pair,
                             const Eigen::MatrixXcd& hop) {
  const auto n = static_cast<Eigen::Index>(first.size());
  // ξ = (c_0, c_0†, c_1, c_1†, ...)
  Eigen::MatrixXcd s(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const cd delta = k == l ? 1.0 : 0.0;
      s(2 * k, 2 * l) = pair(k, l);
      s(2 * k, 2 * l + 1) = hop(l, k) + delta;
      s(2 * k + 1, 2 * l) = hop(k, l);
      s(2 * k + 1, 2 * l + 1) = std::conj(pair(k, l));
    }
  }
  const double r = 1.0 / std::sqrt(2.0);
  const cd i{0.0, 1.0};
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  Eigen::VectorXcd xi_mean(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    u(2 * k, 2 * k) = r;
    u(2 * k, 2 * k + 1) = r;
    u(2 * k + 1, 2 * k) = -i * r;
    u(2 * k + 1, 2 * k + 1) = i * r;
    xi_mean(2 * k) = first[k];
    xi_mean(2 * k + 1) = std::conj(first[k]);
  }
  MomentState st;
  st.time = time;
  st.mean = (u * xi_mean).real();
  const Eigen::MatrixXd second = (u * s * u.transpose()).real();
  st.cov = second - st.mean * st.mean.transpose();
  st.cov = 0.5 * (st.cov + st.cov.transpose());
  return st;
}

/// Expectation values of one evolution sample.
class Observer {
 public:
  Observer(const FockBasis& basis, bool density, const simd::KernelTable& kernels)
      : basis_(basis), density_(density), kernels_(kernels), ops_(moment_operators(basis)),
        scratch_(2 * basis.dimension()) {}

  cd expect(const DiaOperator& op, const std::vector<double>& state) {
    if (!density_) {
      std::fill(scratch_.begin(), scratch_.end(), 0.0);
      op.apply_add(kernels_, state.data(), scratch_.data());
      const std::size_t n = scratch_.size();
      return {kernels_.dot(state.data(), scratch_.data(), n), kernels_.cross(state.data(), scratch_.data(), n)};
    }
    // Tr(Oρ) = Σ_i Σ_d w_d[i] ρ[i + o_d, i]
    const std::size_t dim = basis_.dimension();
    cd acc{};
    for (const auto& d : op.diagonals) {
      for (std::size_t i = d.begin; i < d.end; ++i) {
        const std::size_t src = (static_cast<std::size_t>(static_cast<std::int64_t>(i) + d.offset)) * dim + i;
        const cd rho{state[2 * src], state[2 * src + 1]};
        const double w = d.weights[2 * (i - d.begin) + 1];
        acc += (d.swap ? cd{0.0, w} : cd{w, 0.0}) * rho;
      }
    }
    return acc;
  }

  double norm(const std::vector<double>& state) const {
    if (!density_) return kernels_.dot(state.data(), state.data(), state.size());
    const std::size_t dim = basis_.dimension();
    double tr = 0.0;
    for (std::size_t i = 0; i < dim; ++i) tr += state[2 * (i * dim + i)];
    return tr;
  }

  double boundary_population(const std::vector<double>& state) const {
    const std::size_t dim = basis_.dimension();
    double pop = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      if (!basis_.on_boundary(i)) continue;
      if (density_) {
        pop += state[2 * (i * dim + i)];
      } else {
        pop += state[2 * i] * state[2 * i] + state[2 * i + 1] * state[2 * i + 1];
      }
    }
    return pop;
  }

  MomentState moments(double time, const std::vector<double>& state) {
    const std::size_t n = basis_.modes();
    std::vector<cd> first(n);
    Eigen::MatrixXcd pair(n, n), hop(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      first[k] = expect(ops_.lower[k], state);
      for (std::size_t l = k; l < n; ++l) {
        pair(k, l) = pair(l, k) = expect(ops_.pair[k][l - k], state);
        const cd h = expect(ops_.hop[k][l - k], state);
        hop(k, l) = h;
        hop(l, k) = std::conj(h);
      }
    }
    for (std::size_t k = 0; k < n; ++k) hop(k, k) = hop(k, k).real();
    return assemble_moments(time, first, pair, hop);
  }

 private:
  const FockBasis& basis_;
  bool density_;
  const simd::KernelTable& kernels_;
  MomentOperators ops_;
  std::vector<double> scratch_;
};

/// Classical RK4 on an interleaved complex vector.
class Rk4 {
 public:
  Rk4(const DiaOperator& gen, const simd::KernelTable& kernels)
      : gen_(gen), k_(kernels), n_(2 * gen.dimension), k1_(n_), k2_(n_), k3_(n_), k4_(n_), tmp_(n_) {}

  void step(std::vector<double>& y, double h) {
    eval(y, k1_);
    k_.waxpy(tmp_.data(), y.data(), 0.5 * h, k1_.data(), n_);
    eval(tmp_, k2_);
    k_.waxpy(tmp_.data(), y.data(), 0.5 * h, k2_.data(), n_);
    eval(tmp_, k3_);
    k_.waxpy(tmp_.data(), y.data(), h, k3_.data(), n_);
    eval(tmp_, k4_);
    k_.axpy(y.data(), h / 6.0, k1_.data(), n_);
    k_.axpy(y.data(), h / 3.0, k2_.data(), n_);
    k_.axpy(y.data(), h / 3.0, k3_.data(), n_);
    k_.axpy(y.data(), h / 6.0, k4_.data(), n_);
  }

 private:
  void eval(const std::vector<double>& x, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    gen_.apply_add(k_, x.data(), out.data());
  }

  const DiaOperator& gen_;
  const simd::KernelTable& k_;
  std::size_t n_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

const simd::KernelTable& pick_kernels(const FockConfig& cfg) {
  if (!cfg.isa) return simd::active_kernels();
  for (const auto* t : simd::available_kernels()) {
    if (t->isa == *cfg.isa) return *t;
  }
  throw ParameterError("kernel variant '" + std::string(simd::to_string(*cfg.isa)) +
                       "' is not available on this machine");
}

bool is_full(HamiltonianSource s) {
  return s == HamiltonianSource::FullEqual || s == HamiltonianSource::FullUnequal;
}

/// Expected peak spin excitation over [0, t_end] from the eliminated model,
/// used only for the cutoff advisory.
double predicted_peak(const SystemParams& p, HamiltonianSource s, double t_end) {
  EffectiveParams e;
  try {
    e = effective_params(p);
  } catch (const ResonanceError&) {
    return 0.0;
  }
  double shift = e.a_coef + 0.5 * e.delta;
  if (s == HamiltonianSource::EffectiveEqual || s == HamiltonianSource::FullEqual) shift = e.a_coef;
  if (s == HamiltonianSource::PureSqueeze) shift = 0.0;
  const double b2 = e.b_coef * e.b_coef;
  const double mu2 = shift * shift - b2;
  if (b2 == 0.0) return 0.0;
  if (mu2 > 0.0) return b2 / mu2 * (t_end * std::sqrt(mu2) >= kPi / 2 ? 1.0 : std::pow(std::sin(std::sqrt(mu2) * t_end), 2));
  if (mu2 == 0.0) return b2 * t_end * t_end;
  const double k = std::sqrt(-mu2);
  return b2 / (-mu2) * std::pow(std::sinh(k * t_end), 2);
}

struct Evolution {
  std::vector<MomentState> moments;
  std::vector<double> number_difference;
  double norm_drift = 0.0;
  double max_boundary = 0.0;
  double step = 0.0;
};

Evolution run(const FockBasis& basis, const DiaOperator& gen, bool density, const simd::KernelTable& kernels,
              double t_end, int n_samples, double h_max, double boundary_tolerance) {
  const std::size_t dim = basis.dimension();
  std::vector<double> state(density ? 2 * dim * dim : 2 * dim, 0.0);
  state[0] = 1.0;  // vacuum |0…0⟩ (or |0⟩⟨0|)

  Observer obs(basis, density, kernels);
  Rk4 rk(gen, kernels);
  const double dt = t_end / (n_samples - 1);
  const int substeps = h_max > 0.0 ? std::max(1, static_cast<int>(std::ceil(dt / h_max - 1e-12))) : 1;
  const double h = dt / substeps;

  Evolution ev;
  ev.step = h;
  auto record = [&](double t) {
    const double bnd = obs.boundary_population(state);
    ev.max_boundary = std::max(ev.max_boundary, bnd);
    if (bnd > boundary_tolerance) {
      std::ostringstream msg;
      msg << "Fock cutoff overflow at t = " << t << " s: boundary population " << bnd << " exceeds "
          << boundary_tolerance << "; raise the cutoffs";
      throw CutoffOverflowError(msg.str());
    }
    ev.norm_drift = std::max(ev.norm_drift, std::abs(obs.norm(state) - 1.0));
    MomentState m = obs.moments(t, state);
    double nd = mode_excitation(m, 0);
    if (basis.modes() > 1) nd -= mode_excitation(m, 1);
    ev.number_difference.push_back(nd);
    ev.moments.push_back(std::move(m));
  };

  record(0.0);
  for (int s = 1; s < n_samples; ++s) {
    for (int j = 0; j < substeps; ++j) rk.step(state, h);
    record(s * dt);
  }
  return ev;
}

}  // namespace

std::string_view to_string(HamiltonianSource s) {
  switch (s) {
    case HamiltonianSource::FullEqual: return "full-equal";
    case HamiltonianSource::FullUnequal: return "full";
    case HamiltonianSource::EffectiveEqual: return "effective-equal";
    case HamiltonianSource::EffectiveUnequal: return "effective";
    case HamiltonianSource::PureSqueeze: return "squeeze";
  }
  return "unknown";
}

HamiltonianSource parse_source(std::string_view name) {
  for (auto s : {HamiltonianSource::FullEqual, HamiltonianSource::FullUnequal, HamiltonianSource::EffectiveEqual,
                 HamiltonianSource::EffectiveUnequal, HamiltonianSource::PureSqueeze}) {
    if (to_string(s) == name) return s;
  }
  throw ParameterError("unknown Hamiltonian source '" + std::string(name) + "'");
}

std::size_t mode_count(HamiltonianSource s) { return is_full(s) ? 4 : 2; }

void DiaOperator::apply_add(const simd::KernelTable& k, const double* x, double* y) const {
  for (const Diagonal& d : diagonals) {
    const std::size_t n = 2 * (d.end - d.begin);
    const double* xs = x + 2 * (static_cast<std::int64_t>(d.begin) + d.offset);
    double* ys = y + 2 * d.begin;
    if (d.swap) {
      k.dia_swap(ys, xs, d.weights.data(), n);
    } else {
      k.dia_real(ys, xs, d.weights.data(), n);
    }
  }
}

double DiaOperator::spectral_bound() const {
  std::vector<double> row(dimension, 0.0);
  for (const Diagonal& d : diagonals) {
    for (std::size_t i = d.begin; i < d.end; ++i) row[i] += std::abs(d.weights[2 * (i - d.begin) + 1]);
  }
  return row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
}

FockBasis::FockBasis(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw ParameterError("Fock basis needs at least one mode");
  strides_.assign(cutoffs_.size(), 1);
  for (std::size_t k = cutoffs_.size(); k-- > 0;) {
    if (cutoffs_[k] < 2) throw ParameterError("every Fock cutoff must be at least 2");
    strides_[k] = dimension_;
    dimension_ *= static_cast<std::size_t>(cutoffs_[k]);
    if (dimension_ > kMaxStateAmplitudes)
      throw ParameterError("Fock basis exceeds the budget of " + std::to_string(kMaxStateAmplitudes) + " amplitudes");
  }
}

int FockBasis::occupation(std::size_t index, std::size_t k) const {
  return static_cast<int>((index / strides_[k]) % static_cast<std::size_t>(cutoffs_[k]));
}

bool FockBasis::on_boundary(std::size_t index) const {
  for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
    if (occupation(index, k) == cutoffs_[k] - 1) return true;
  }
  return false;
}

std::vector<Term> hamiltonian_terms(const SystemParams& p, HamiltonianSource s) {
  using K = Term::Kind;
  switch (s) {
    case HamiltonianSource::FullEqual:
    case HamiltonianSource::FullUnequal: {
      const double w = p.detuning();
      const double delta = s == HamiltonianSource::FullEqual ? 0.0 : p.zeeman_offset();
      const double g = p.g_collective;
      // H = −ω(a†a + b†b) + Δ c2†c2 + g(a†c1 + h.c.) + g(b c2 + h.c.) + v(a†b + h.c.)
      return {{K::Number, kA, kA, -w},        {K::Number, kB, kB, -w},      {K::Number, kC2, kC2, delta},
              {K::Hopping, kA, kC1, g},       {K::Pair, kB, kC2, g},        {K::Hopping, kA, kB, p.v}};
    }
    case HamiltonianSource::EffectiveEqual:
    case HamiltonianSource::EffectiveUnequal: {
      const EffectiveParams e = effective_params(p);
      const double delta = s == HamiltonianSource::EffectiveEqual ? 0.0 : e.delta;
      return {{K::Number, 0, 0, e.a_coef}, {K::Number, 1, 1, e.a_coef + delta}, {K::Pair, 0, 1, e.b_coef}};
    }
    case HamiltonianSource::PureSqueeze:
      return {{K::Pair, 0, 1, effective_params(p).b_coef}};
  }
  return {};
}

DiaOperator schrodinger_generator(const FockBasis& basis, const std::vector<Term>& terms) {
  DiaBuilder b(basis.dimension());
  for (const Element& e : hamiltonian_elements(basis, terms)) {
    b.add(static_cast<std::int64_t>(e.col) - static_cast<std::int64_t>(e.row), e.row, cd{0.0, -e.value});
  }
  return b.finish();
}

DiaOperator lindblad_generator(const FockBasis& basis, const std::vector<Term>& terms,
                               const std::vector<std::size_t>& damped_modes, double kappa, double n_th) {
  const std::size_t dim = basis.dimension();
  if (dim * dim > kMaxDensityEntries)
    throw ParameterError("density matrix exceeds the budget of " + std::to_string(kMaxDensityEntries) + " entries");
  DiaBuilder b(dim * dim);
  const auto sdim = static_cast<std::int64_t>(dim);

  for (const Element& e : hamiltonian_elements(basis, terms)) {
    const std::int64_t off = static_cast<std::int64_t>(e.col) - static_cast<std::int64_t>(e.row);
    for (std::size_t j = 0; j < dim; ++j) {
      // −i H ρ: out (row, j) ← ρ(col, j)
      b.add(off * sdim, e.row * dim + j, cd{0.0, -e.value});
      // +i ρ H: out (j, col) ← ρ(j, row), H symmetric
      b.add(-off, j * dim + e.col, cd{0.0, e.value});
    }
  }

  const double down = kappa * (n_th + 1.0);
  const double up = kappa * n_th;
  for (std::size_t m : damped_modes) {
    const int d = basis.cutoff(m);
    const auto s = static_cast<std::int64_t>(basis.stride(m));
    for (std::size_t i = 0; i < dim; ++i) {
      const int ni = basis.occupation(i, m);
      for (std::size_t j = 0; j < dim; ++j) {
        const int nj = basis.occupation(j, m);
        const std::size_t out = i * dim + j;
        // c ρ c†
        if (down > 0.0 && ni + 1 < d && nj + 1 < d)
          b.add(s * sdim + s, out, down * std::sqrt(double(ni + 1) * (nj + 1)));
        // c† ρ c
        if (up > 0.0 && ni >= 1 && nj >= 1) b.add(-s * sdim - s, out, up * std::sqrt(double(ni) * nj));
        // −½{c†c, ρ} and −½{cc†, ρ} with the truncated cc†
        const double cc_i = ni + 1 < d ? ni + 1.0 : 0.0;
        const double cc_j = nj + 1 < d ? nj + 1.0 : 0.0;
        b.add(0, out, -0.5 * down * (ni + nj) - 0.5 * up * (cc_i + cc_j));
      }
    }
  }
  return b.finish();
}

FockRun evolve_fock(const SystemParams& p, const FockConfig& cfg, double t_end, int n_samples,
                    const TraceSettings& settings) {
  check_params(p);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be positive");
  if (n_samples < 2) throw ParameterError("n_samples must be at least 2");
  const std::size_t modes = mode_count(cfg.source);
  if (cfg.cutoffs.size() != modes) {
    throw ParameterError("source '" + std::string(to_string(cfg.source)) + "' needs " + std::to_string(modes) +
                         " cutoffs, got " + std::to_string(cfg.cutoffs.size()));
  }
  if (cfg.dissipation && !is_full(cfg.source))
    throw ParameterError("dissipation acts on the mechanical modes; use a full source");

  const simd::KernelTable& kernels = pick_kernels(cfg);
  const FockBasis basis(cfg.cutoffs);
  const auto terms = hamiltonian_terms(p, cfg.source);
  const DiaOperator gen = cfg.dissipation ? lindblad_generator(basis, terms, {kA, kB}, p.kappa, p.n_th)
                                          : schrodinger_generator(basis, terms);

  FockRun out;
  out.isa = kernels.isa;
  const double peak = predicted_peak(p, cfg.source, t_end);
  const int needed = static_cast<int>(std::ceil(4.0 + 6.0 * peak));
  for (std::size_t k = 0; k < modes; ++k) {
    if (k < 2 && cfg.cutoffs[k] < needed) {
      std::ostringstream msg;
      msg << "cutoff " << cfg.cutoffs[k] << " of mode " << k << " is below 4 + 6*peak excitation = " << needed;
      out.warnings.push_back(msg.str());
    }
  }

  const double bound = gen.spectral_bound();
  double h_max = bound > 0.0 ? 1.0 / (50.0 * bound) : 0.0;
  if (cfg.integrator_step > 0.0) h_max = h_max > 0.0 ? std::min(h_max, cfg.integrator_step) : cfg.integrator_step;

  Evolution ev = run(basis, gen, cfg.dissipation, kernels, t_end, n_samples, h_max, cfg.boundary_tolerance);
  if (cfg.richardson_check) {
    Evolution fine = run(basis, gen, cfg.dissipation, kernels, t_end, n_samples, 0.5 * ev.step,
                         cfg.boundary_tolerance);
    double err = 0.0;
    for (std::size_t s = 0; s < ev.moments.size(); ++s) {
      err = std::max(err, (ev.moments[s].cov - fine.moments[s].cov).cwiseAbs().maxCoeff());
      err = std::max(err, (ev.moments[s].mean - fine.moments[s].mean).cwiseAbs().maxCoeff());
    }
    out.richardson_error = err;
    ev = std::move(fine);
  }

  const ModeLayout layout = is_full(cfg.source) ? ModeLayout::full() : ModeLayout::spins();
  TraceSettings ts = settings;
  ts.n_spins = static_cast<double>(p.n_spins);
  out.trace = make_squeezing_trace(std::span<const MomentState>(ev.moments), layout, ts);
  out.moments = std::move(ev.moments);
  out.number_difference = std::move(ev.number_difference);
  out.norm_drift = ev.norm_drift;
  out.max_boundary_population = ev.max_boundary;
  out.step = ev.step;
  return out;
}

Adjudication adjudicate_convention(const SystemParams& p, int cutoff) {
  const EffectiveParams e = effective_params(p);
  if (p.g_collective == 0.0 || !(std::abs(e.lambda) > 0.0))
    throw InconclusiveError("no coupling: the variance is flat and has no first minimum");
  if (std::abs(e.delta) > 1e-9 * std::abs(e.a_coef) || analytic::classify_regime(e) != analytic::Regime::Oscillatory)
    throw RegimeError("adjudication needs Delta = 0 in the oscillatory regime");

  Adjudication adj{};
  adj.predicted_lambda_t = analytic::first_minimum_time(p, analytic::OscillationConvention::LambdaT);
  adj.predicted_two_lambda_t = analytic::first_minimum_time(p, analytic::OscillationConvention::TwoLambdaT);

  FockConfig cfg;
  cfg.cutoffs = {cutoff, cutoff};
  cfg.source = HamiltonianSource::EffectiveEqual;
  cfg.richardson_check = false;
  cfg.boundary_tolerance = 1e-3;
  const int samples = 401;
  const FockRun run = evolve_fock(p, cfg, 1.25 * adj.predicted_lambda_t, samples);
  const auto& v = run.trace.variance_theta;

  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi - *lo < 1e-9) throw InconclusiveError("variance is flat over the adjudication window");

  std::optional<std::size_t> first_min;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    if (v[k] < v[k - 1] && v[k] <= v[k + 1]) {
      first_min = k;
      break;
    }
  }
  if (!first_min) throw InconclusiveError("no interior variance minimum found");
  const std::size_t k = *first_min;
  const double dt = run.trace.times[1] - run.trace.times[0];
  // parabola through the three samples around the minimum
  const double denom = v[k - 1] - 2.0 * v[k] + v[k + 1];
  const double shift = denom > 0.0 ? 0.5 * (v[k - 1] - v[k + 1]) / denom : 0.0;
  adj.observed_time = run.trace.times[k] + shift * dt;

  const double err_l = std::abs(adj.observed_time - adj.predicted_lambda_t) / adj.predicted_lambda_t;
  const double err_2l = std::abs(adj.observed_time - adj.predicted_two_lambda_t) / adj.predicted_two_lambda_t;
  if (std::min(err_l, err_2l) > 0.05) {
    std::ostringstream msg;
    msg << "first minimum at " << adj.observed_time << " s matches neither " << adj.predicted_lambda_t << " s nor "
        << adj.predicted_two_lambda_t << " s";
    throw InconclusiveError(msg.str());
  }
  adj.convention = err_l <= err_2l ? analytic::OscillationConvention::LambdaT
                                   : analytic::OscillationConvention::TwoLambdaT;
  return adj;
}

}  // namespace nvsq::fock
