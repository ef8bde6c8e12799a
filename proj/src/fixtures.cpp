// Copyright 2026 The ctoqw Authors
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

#include "ctoqw/fixtures.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "ctoqw/auxiliary.hpp"

namespace ctoqw::fixtures {

namespace {

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

constexpr double kRefTol = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

class Suite {
 public:
  void add(std::string name, bool ok, std::string detail) {
    checks_.push_back({std::move(name), ok, std::move(detail)});
  }

  // Runs body, turning any exception into a failed check.
  template <class Fn>
  void run(const std::string& name, Fn&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(name, false, std::string("exception: ") + e.what());
    }
  }

  void stationary(const std::string& name, const Coin& coin, const Matrix& rho_ref, double m_ref) {
    run(name, [&] {
      const StationaryAnalysis sa = stationary_states(coin);
      if (!sa.rho_inv) {
        add(name, false, "no unique stationary state (kernel_dim " + std::to_string(sa.kernel_dim) + ")");
        return;
      }
      const double rho_err = (sa.rho_inv->matrix() - rho_ref).cwiseAbs().maxCoeff();
      const double m = drift(coin, *sa.rho_inv).m;
      const bool ok = rho_err <= kRefTol && std::abs(m - m_ref) <= kRefTol;
      add(name, ok, "max |rho_inv - ref| = " + fmt(rho_err) + ", m = " + fmt(m) + " (ref " + fmt(m_ref) + ")");
    });
  }

  void drift_value(const std::string& name, const Coin& coin, double m_ref) {
    run(name, [&] {
      const StationaryAnalysis sa = stationary_states(coin);
      if (!sa.rho_inv) {
        add(name, false, "no unique stationary state");
        return;
      }
      const double m = drift(coin, *sa.rho_inv).m;
      add(name, std::abs(m - m_ref) <= kRefTol, "m = " + fmt(m) + " (ref " + fmt(m_ref) + ")");
    });
  }

  void verdict(const std::string& name, const Coin& coin, Verdict expected,
               const Vector* transient = nullptr) {
    run(name, [&] {
      const ClassificationResult r = classify(coin);
      bool ok = r.verdict == expected;
      std::string detail = std::string(to_string(r.verdict)) + " via " + r.rule;
      if (ok && transient != nullptr) {
        const Matrix ref = DensityMatrix::from_pure(*transient).matrix();
        const double err = r.transient_state
                               ? (r.transient_state->matrix() - ref).cwiseAbs().maxCoeff()
                               : std::numeric_limits<double>::infinity();
        ok = err <= 1e-8;
        detail += ", transient-state error " + fmt(err);
      }
      add(name, ok, detail);
    });
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

}  // namespace

Coin diagonal_pair(cplx a) {
  const Matrix c = mat2(std::sqrt(2.0), 0.0, 0.0, std::sqrt(11.0));
  const Matrix am = mat2(-std::sqrt(5.0), 0.0, 0.0, a);
  const Matrix h = mat2(1.0, cplx(1.0, -2.0), cplx(1.0, 2.0), 1.0);
  return Coin::validate(c, am, h);
}

Coin shared_basis(cplx a, cplx c, double h1, cplx h2, double h3) {
  const Matrix cm = 0.5 * mat2(1.0 + c, kI * (-1.0 + c), kI * (1.0 - c), 1.0 + c);
  const Matrix am = 0.5 * mat2(2.0 + a, kI * (2.0 - a), kI * (-2.0 + a), 2.0 + a);
  const Matrix h = mat2(h1, h2, std::conj(h2), h3);
  return Coin::validate(cm, am, h);
}

Vector shared_basis_u1() {
  Vector u(2);
  u << -kI, 1.0;
  return u / std::sqrt(2.0);
}

Vector shared_basis_u2() {
  Vector u(2);
  u << kI, 1.0;
  return u / std::sqrt(2.0);
}

Coin two_param(double y, double h) {
  const Matrix c = mat2(-1.0, 1.0, 2.0 * y, 1.0);
  const Matrix a = mat2(1.0, 1.0, y, 2.0);
  const Matrix hm = mat2(0.0, kI * h, -kI * h, 0.0);
  return Coin::validate(c, a, hm);
}

double two_param_drift(double y, double h) {
  const double y2 = y * y, y3 = y2 * y, y4 = y3 * y, h2 = h * h;
  const double num = 12 * y * h - 16 * h + 48 * y3 * h - 12 * y2 * h2 + 111 * y2 + 12 * h2 -
                     3 * y4 - 62 * y3 + 4 * y2 * h - 48 * y;
  const double den = 25 * y4 + 8 * h2 - 30 * y3 - 12 * y * h + 37 * y2 + 12 * h - 36 * y + 14;
  return num / den;
}

double two_param_drift_y0(double h) { return 2 * h * (3 * h - 4) / (4 * h * h + 6 * h + 7); }

double two_param_root_minus() { return (2.0 - std::sqrt(71.0)) / 12.0; }
double two_param_root_plus() { return (2.0 + std::sqrt(71.0)) / 12.0; }

Coin three_level(double c) {
  Matrix cm = Matrix::Zero(3, 3);
  cm(0, 0) = c;
  cm(1, 0) = 1.0;
  cm(2, 2) = 1.0;
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  a(1, 2) = 1.0;
  a(2, 2) = 1.0;
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 1.0;
  h(0, 1) = 2.0;
  h(1, 0) = 2.0;
  return Coin::validate(cm, a, h);
}

Matrix three_level_c0_rho_inv() {
  Matrix r = Matrix::Zero(3, 3);
  r(0, 0) = 21.0;
  r(0, 1) = cplx(-19.0, -2.0);
  r(1, 0) = cplx(-19.0, 2.0);
  r(1, 1) = 32.0;
  return r / 53.0;
}

Matrix three_level_c1_rho_inv() {
  Matrix r = Matrix::Zero(3, 3);
  r(0, 0) = 0.5;
  r(1, 1) = 0.5;
  return r;
}

Coin scalar(cplx a, cplx c, double h) {
  Matrix cm(1, 1), am(1, 1), hm(1, 1);
  cm << c;
  am << a;
  hm << h;
  return Coin::validate(cm, am, hm);
}

std::vector<Check> run_reference_suite() {
  Suite s;
  const double r8 = 2.0 * std::sqrt(2.0);

  s.stationary("three_level c=0 stationary state and drift", three_level(0.0), three_level_c0_rho_inv(),
               kThreeLevelC0Drift);
  s.stationary("three_level c=1 stationary state and drift", three_level(1.0), three_level_c1_rho_inv(), 0.0);
  s.verdict("three_level c=0 transient", three_level(0.0), Verdict::Transient);
  s.verdict("three_level c=1 recurrent", three_level(1.0), Verdict::Recurrent);

  for (double h : {0.0, 0.5, 1.0, 4.0 / 3.0, 2.0}) {
    const std::string tag = "two_param y=0 h=" + fmt(h);
    s.drift_value(tag + " drift", two_param(0.0, h), two_param_drift_y0(h));
    const bool zero = h == 0.0 || h == 4.0 / 3.0;
    s.verdict(tag + (zero ? " recurrent" : " transient"), two_param(0.0, h),
              zero ? Verdict::Recurrent : Verdict::Transient);
  }
  for (double h : {two_param_root_minus(), two_param_root_plus()}) {
    const std::string tag = "two_param y=1/2 h=" + fmt(h);
    s.verdict(tag + " recurrent", two_param(0.5, h), Verdict::Recurrent);
    s.verdict(tag + "-0.1 transient", two_param(0.5, h - 0.1), Verdict::Transient);
    s.verdict(tag + "+0.1 transient", two_param(0.5, h + 0.1), Verdict::Transient);
  }

  s.verdict("diagonal_pair |a|=2sqrt2 recurrent", diagonal_pair(r8), Verdict::Recurrent);
  s.verdict("diagonal_pair a=2sqrt2 i recurrent", diagonal_pair(cplx(0.0, r8)), Verdict::Recurrent);
  s.verdict("diagonal_pair a=3 transient", diagonal_pair(3.0), Verdict::Transient);
  s.verdict("diagonal_pair a=1 transient", diagonal_pair(1.0), Verdict::Transient);

  // H is diagonal in the shared basis iff h1 = h3 and Re h2 = 0.
  const Vector u1 = shared_basis_u1();
  const Vector u2 = shared_basis_u2();
  const cplx h2(0.0, 0.5);
  s.verdict("shared_basis |a|!=1 |c|!=2 transient", shared_basis(3.0, 3.0, 1.0, h2, 1.0), Verdict::Transient);
  s.verdict("shared_basis |a|=1 |c|=2 recurrent", shared_basis(1.0, 2.0, 1.0, h2, 1.0), Verdict::Recurrent);
  s.verdict("shared_basis |a|!=1 |c|=2 partially recurrent", shared_basis(2.0, 2.0, 1.0, h2, 1.0),
            Verdict::PartiallyRecurrent, &u1);
  s.verdict("shared_basis |a|=1 |c|!=2 partially recurrent", shared_basis(1.0, 1.0, 1.0, h2, 1.0),
            Verdict::PartiallyRecurrent, &u2);
  s.verdict("shared_basis unique state |c|^2-|a|^2=3 recurrent", shared_basis(1.0, 2.0, 1.0, 1.0, 0.0),
            Verdict::Recurrent);
  s.verdict("shared_basis unique state |c|^2-|a|^2!=3 transient", shared_basis(2.0, 2.0, 1.0, 1.0, 0.0),
            Verdict::Transient);

  s.verdict("scalar a=c=1 recurrent", scalar(1.0, 1.0), Verdict::Recurrent);
  s.verdict("scalar a=2 c=1 transient", scalar(2.0, 1.0), Verdict::Transient);
  return s.take();
}

}  // namespace ctoqw::fixtures
