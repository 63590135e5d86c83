#include <doctest.h>

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "dimreader/dual.hpp"
#include "dimreader/rng.hpp"
#include "support/oracles.hpp"

using dimreader::Dual;
using dimreader::Rng;

TEST_CASE("dual addition is componentwise") {
  Dual a(2, 1), b(3, 0);
  Dual c = a + b;
  CHECK(c.value() == 5.0);
  CHECK(c.deriv() == 1.0);

  Dual d = Dual(7.5, 0) + Dual(0, 0);
  CHECK(d.value() == 7.5);
  CHECK(d.deriv() == 0.0);

  Dual e = Dual(1.5, 2.0) + Dual(2.5, -1.0);
  CHECK(e.value() == 4.0);
  CHECK(e.deriv() == 1.0);
}

TEST_CASE("dual multiplication applies the product rule") {
  Dual sq = Dual(2, 1) * Dual(2, 1);
  CHECK(sq.value() == 4.0);
  CHECK(sq.deriv() == 4.0);

  Dual scaled = Dual(5.0, 0) * Dual(3.0, 1);
  CHECK(scaled.value() == 15.0);
  CHECK(scaled.deriv() == 5.0);

  Dual prod = Dual(3, 2) * Dual(5, -1);
  CHECK(prod.value() == 15.0);
  CHECK(prod.deriv() == 7.0);
}

TEST_CASE("elementary functions follow the chain rule") {
  Dual r = sqrt(Dual(4, 1));
  CHECK(r.value() == 2.0);
  CHECK(r.deriv() == 0.25);

  Dual e = exp(Dual(0, 3));
  CHECK(e.value() == 1.0);
  CHECK(e.deriv() == 3.0);

  Dual m = max(Dual(2, 5), Dual(3, -1));
  CHECK(m.value() == 3.0);
  CHECK(m.deriv() == -1.0);
}

TEST_CASE("domain violations throw instead of producing non-finite values") {
  CHECK_THROWS_AS(sqrt(Dual(0.0, 1.0)), dimreader::DomainError);
  CHECK_THROWS_AS(sqrt(Dual(-1.0, 0.0)), dimreader::DomainError);
  CHECK_THROWS_AS(log(Dual(0.0, 1.0)), dimreader::DomainError);
  CHECK_THROWS_AS(Dual(1.0, 0.0) / Dual(0.0, 1.0), dimreader::DomainError);
}

TEST_CASE("abs at zero uses the subgradient convention") {
  Dual z = abs(Dual(0.0, 3.0));
  CHECK(z.value() == 0.0);
  CHECK(z.deriv() == 0.0);
  CHECK(abs(Dual(-2.0, 1.0)).deriv() == -1.0);
  CHECK(abs(Dual(2.0, 1.0)).deriv() == 1.0);
}

TEST_CASE("comparisons read the value channel only") {
  CHECK(Dual(1.0, 100.0) < Dual(2.0, -100.0));
  CHECK(Dual(1.0, 5.0) == Dual(1.0, -5.0));
  CHECK(min(Dual(2, 5), Dual(3, -1)).deriv() == 5.0);
}

namespace {

// Random closed-form composites built from +, *, /, exp, log, sqrt,
// pow, abs over a positive-shifted argument, evaluated both as duals
// and as plain doubles for finite differencing.
struct Composite {
  std::function<Dual(Dual)> dual_fn;
  std::function<double(double)> real_fn;
};

Composite random_composite(Rng& rng) {
  // Chain 4 unary/binary stages with fixed random constants.
  struct Stage {
    int op;
    double c;
  };
  auto stages = std::make_shared<std::vector<Stage>>();
  for (int s = 0; s < 4; ++s)
    stages->push_back({rng.uniform_int(7), 0.5 + 2.0 * rng.uniform()});

  auto apply_dual = [stages](Dual x) {
    Dual y = x;
    for (const auto& st : *stages) {
      switch (st.op) {
        case 0: y = y + Dual(st.c); break;
        case 1: y = y * Dual(st.c); break;
        case 2: y = exp(y * Dual(0.2)); break;
        case 3: y = log(y * y + Dual(st.c)); break;
        case 4: y = sqrt(y * y + Dual(st.c)); break;
        case 5: y = pow(y * y + Dual(st.c), 1.5); break;
        case 6: y = Dual(st.c) / (y * y + Dual(1.0)); break;
      }
    }
    return y;
  };
  auto apply_real = [stages](double x) {
    double y = x;
    for (const auto& st : *stages) {
      switch (st.op) {
        case 0: y = y + st.c; break;
        case 1: y = y * st.c; break;
        case 2: y = std::exp(y * 0.2); break;
        case 3: y = std::log(y * y + st.c); break;
        case 4: y = std::sqrt(y * y + st.c); break;
        case 5: y = std::pow(y * y + st.c, 1.5); break;
        case 6: y = st.c / (y * y + 1.0); break;
      }
    }
    return y;
  };
  return {apply_dual, apply_real};
}

}  // namespace

TEST_CASE("dual derivatives match central finite differences on random composites") {
  Rng rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Composite f = random_composite(rng);
    double x = 0.2 + 2.0 * rng.uniform();
    Dual out = f.dual_fn(Dual::seeded(x));
    double fd = oracles::central_difference(f.real_fn, x, 1e-6);
    double scale = std::max({std::abs(out.deriv()), std::abs(fd), 1e-9});
    CHECK(std::abs(out.deriv() - fd) / scale <= 1e-6);
    CHECK(out.value() == f.real_fn(x));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("composition of duals equals dual of composition") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    Composite f = random_composite(rng);
    Composite g = random_composite(rng);
    double x = 0.3 + rng.uniform();
    // g(f(x)) evaluated in one dual sweep...
    Dual chained = g.dual_fn(f.dual_fn(Dual::seeded(x)));
    // ...equals the hand-applied chain rule from two separate sweeps.
    Dual inner = f.dual_fn(Dual::seeded(x));
    Dual outer = g.dual_fn(Dual::seeded(inner.value()));
    CHECK(chained.value() == outer.value());
    double composed = outer.deriv() * inner.deriv();
    double scale = std::max({std::abs(chained.deriv()), std::abs(composed), 1e-12});
    CHECK(std::abs(chained.deriv() - composed) / scale <= 1e-12);
  }
}

TEST_CASE("zero seeds stay zero through any computation") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Composite f = random_composite(rng);
    double x = 0.4 + rng.uniform();
    Dual out = f.dual_fn(Dual(x, 0.0));
    CHECK(out.deriv() == 0.0);
    CHECK(out.value() == f.real_fn(x));
  }
}
