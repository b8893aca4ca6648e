#include "cocycle_lab/algebra.hpp"

#include <cmath>

#include "cocycle_lab/errors.hpp"
#include "cocycle_lab/linalg.hpp"

namespace cocycle_lab {

AlgebraElement::AlgebraElement(GroupPtr group, Eigen::VectorXcd coeffs)
    : group_(std::move(group)), coeffs_(std::move(coeffs)) {
  if (!group_) throw ValidationError("algebra element needs a group");
  if (static_cast<std::size_t>(coeffs_.size()) != group_->order()) {
    throw ValidationError("algebra element has " + std::to_string(coeffs_.size()) +
                          " coefficients for a group of order " +
                          std::to_string(group_->order()));
  }
}

AlgebraElement AlgebraElement::zero(GroupPtr group) {
  const auto n = static_cast<Eigen::Index>(group->order());
  return {std::move(group), Eigen::VectorXcd::Zero(n)};
}

AlgebraElement AlgebraElement::identity(GroupPtr group) { return lambda(std::move(group), 0); }

AlgebraElement AlgebraElement::lambda(GroupPtr group, Element g, Complex c) {
  if (g >= group->order()) throw InvalidParameter("element index out of range");
  auto f = zero(std::move(group));
  f.coeffs_[g] = c;
  return f;
}

AlgebraElement AlgebraElement::random(GroupPtr group, rng::Stream& stream) {
  const auto n = static_cast<Eigen::Index>(group->order());
  Eigen::VectorXcd c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = stream.normal();
    const double im = stream.normal();
    c[i] = {re, im};
  }
  return {std::move(group), std::move(c)};
}

AlgebraElement AlgebraElement::adjoint() const {
  Eigen::VectorXcd c(coeffs_.size());
  for (Element g = 0; g < group_->order(); ++g) c[group_->inv(g)] = std::conj(coeffs_[g]);
  return {group_, std::move(c)};
}

void require_same_group(const AlgebraElement& f, const AlgebraElement& g) {
  if (f.group_ptr() != g.group_ptr() && !(f.group() == g.group())) {
    throw DomainError("algebra elements live over different groups");
  }
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same_group(*this, o);
  return {group_, coeffs_ + o.coeffs_};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same_group(*this, o);
  return {group_, coeffs_ - o.coeffs_};
}

AlgebraElement AlgebraElement::operator*(Complex c) const { return {group_, coeffs_ * c}; }

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  require_same_group(*this, o);
  const auto& g = *group_;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(coeffs_.size());
  for (Element s = 0; s < g.order(); ++s) {
    const Complex a = coeffs_[s];
    if (a == Complex{}) continue;
    for (Element t = 0; t < g.order(); ++t) c[g.mul(s, t)] += a * o.coeffs_[t];
  }
  return {group_, std::move(c)};
}

AlgebraElement power(const AlgebraElement& f, unsigned k) {
  auto out = AlgebraElement::identity(f.group_ptr());
  for (unsigned i = 0; i < k; ++i) out = out * f;
  return out;
}

AlgebraElement element_from_json(const nlohmann::json& j, GroupPtr group) {
  try {
    const auto& arr = j.at("coeffs");
    Eigen::VectorXcd c(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& v = arr[i];
      if (v.is_number()) {
        c[static_cast<Eigen::Index>(i)] = v.get<double>();
      } else {
        c[static_cast<Eigen::Index>(i)] = {v.at(0).get<double>(), v.at(1).get<double>()};
      }
    }
    return {std::move(group), std::move(c)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("algebra element: ") + e.what());
  }
}

nlohmann::json element_to_json(const AlgebraElement& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < f.coeffs().size(); ++i) {
    arr.push_back({f.coeffs()[i].real(), f.coeffs()[i].imag()});
  }
  return {{"coeffs", arr}};
}

Eigen::MatrixXcd regular_rep(const AlgebraElement& f) {
  const auto& g = f.group();
  const auto n = static_cast<Element>(g.order());
  Eigen::MatrixXcd m(n, n);
  for (Element y = 0; y < n; ++y) {
    const Element y_inv = g.inv(y);
    for (Element x = 0; x < n; ++x) m(x, y) = f[g.mul(x, y_inv)];
  }
  return m;
}

double lp_norm(const AlgebraElement& f, double p) {
  if (!(p >= 1.0)) throw DomainError("L_p norm needs p >= 1");
  return linalg::normalized_schatten(linalg::singular_values(regular_rep(f)), p);
}

AlgebraElement Semigroup::apply(const AlgebraElement& f, double t) const {
  if (!(t >= 0.0)) throw DomainError("semigroup time must be nonnegative");
  Eigen::VectorXcd c = f.coeffs();
  for (Eigen::Index g = 0; g < c.size(); ++g) c[g] *= std::exp(-t * psi_(static_cast<Element>(g)));
  return {f.group_ptr(), std::move(c)};
}

AlgebraElement Semigroup::generator(const AlgebraElement& f) const {
  Eigen::VectorXcd c = f.coeffs();
  for (Eigen::Index g = 0; g < c.size(); ++g) c[g] *= psi_(static_cast<Element>(g));
  return {f.group_ptr(), std::move(c)};
}

AlgebraElement Semigroup::fix_project(const AlgebraElement& f) const {
  Eigen::VectorXcd c = f.coeffs();
  for (Eigen::Index g = 0; g < c.size(); ++g) {
    if (!in_fix(static_cast<Element>(g))) c[g] = 0.0;
  }
  return {f.group_ptr(), std::move(c)};
}

namespace {

void require_semigroup_group(const Semigroup& sg, const AlgebraElement& f) {
  if (sg.group_ptr() != f.group_ptr() && !(*sg.group_ptr() == f.group())) {
    throw DomainError("element and semigroup live over different groups");
  }
}

// sum_{s,t} conj(a_s) b_t w(s,t) lambda(s^-1 t), with w = K or K^2.
AlgebraElement kernel_form(const Semigroup& sg, const AlgebraElement& f, const AlgebraElement& h,
                           bool squared) {
  const auto& g = f.group();
  const auto& psi = sg.psi();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(f.coeffs().size());
  for (Element s = 0; s < g.order(); ++s) {
    const Complex a = std::conj(f[s]);
    if (a == Complex{}) continue;
    const Element s_inv = g.inv(s);
    for (Element t = 0; t < g.order(); ++t) {
      const Element u = g.mul(s_inv, t);
      double k = 0.5 * (psi(s) + psi(t) - psi(u));
      if (squared) k *= k;
      c[u] += a * h[t] * k;
    }
  }
  return {f.group_ptr(), std::move(c)};
}

AlgebraElement gamma_definitional(const Semigroup& sg, const AlgebraElement& f,
                                  const AlgebraElement& g) {
  const auto fs = f.adjoint();
  const auto lhs = sg.generator(fs) * g + fs * sg.generator(g) - sg.generator(fs * g);
  return lhs * Complex(0.5);
}

}  // namespace

AlgebraElement gamma(const Semigroup& sg, const AlgebraElement& f, const AlgebraElement& g,
                     GammaPath path) {
  require_same_group(f, g);
  require_semigroup_group(sg, f);
  if (path == GammaPath::kernel) return kernel_form(sg, f, g, false);
  return gamma_definitional(sg, f, g);
}

AlgebraElement gamma2(const Semigroup& sg, const AlgebraElement& f, const AlgebraElement& g,
                      GammaPath path) {
  require_same_group(f, g);
  require_semigroup_group(sg, f);
  if (path == GammaPath::kernel) return kernel_form(sg, f, g, true);
  const auto sum = gamma_definitional(sg, sg.generator(f), g) +
                   gamma_definitional(sg, f, sg.generator(g)) -
                   sg.generator(gamma_definitional(sg, f, g));
  return sum * Complex(0.5);
}

PositivityResult operator_positivity(const AlgebraElement& f, double tol) {
  const auto h = linalg::checked_hermitian(regular_rep(f));
  const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(h);
  const double norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  return {ev[0] >= -tol * (1.0 + norm), ev[0]};
}

}  // namespace cocycle_lab
