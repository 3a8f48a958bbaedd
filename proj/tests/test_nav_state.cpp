#include <doctest.h>

#include "test_support.hpp"

using namespace uavnav;
using test::random_state;
using test::random_vec;

namespace {

ErrorState21 random_error(std::mt19937& rng, double theta_scale) {
  ErrorState21 dx;
  dx.segment<3>(kIdxTheta) = random_vec(rng, theta_scale);
  dx.segment<3>(kIdxVel) = random_vec(rng, 1.0);
  dx.segment<3>(kIdxPos) = random_vec(rng, 1.0);
  dx.segment<3>(kIdxBg) = random_vec(rng, 0.01);
  dx.segment<3>(kIdxBa) = random_vec(rng, 0.1);
  dx.segment<3>(kIdxThetaA) = random_vec(rng, 0.1);
  dx.segment<3>(kIdxWind) = random_vec(rng, 1.0);
  return dx;
}

}  // namespace

TEST_CASE("zero error injection is the identity") {
  std::mt19937 rng(3);
  const FullState s = random_state(rng);
  for (FilterVariant v : {FilterVariant::kRiekf, FilterVariant::kLiekf,
                          FilterVariant::kEsekf}) {
    const FullState out = inject_error(v, s, ErrorState21::Zero());
    CHECK(out.R_bn.isApprox(s.R_bn, 1e-15));
    CHECK(out.v_n.isApprox(s.v_n, 1e-15));
    CHECK(out.p_n.isApprox(s.p_n, 1e-15));
    CHECK(out.R_ab.isApprox(s.R_ab, 1e-15));
  }
}

TEST_CASE("right injection matches the group error form") {
  std::mt19937 rng(5);
  const FullState s = random_state(rng);
  ErrorState21 dx = ErrorState21::Zero();
  const Vec3 dtheta(0.2, -0.1, 0.3);
  dx.segment<3>(kIdxTheta) = dtheta;
  const FullState out = inject_error_right(s, dx);
  CHECK(out.R_bn.isApprox(so3_exp(dtheta) * s.R_bn, 1e-14));
  CHECK(out.v_n.isApprox(so3_exp(dtheta) * s.v_n, 1e-14));
}

TEST_CASE("injection/extraction round trips") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const FullState s = random_state(rng);
    const ErrorState21 dx = random_error(rng, 0.28);  // |dtheta| < 0.5
    const ErrorState21 back_r =
        extract_error_right(inject_error_right(s, dx), s);
    CHECK((back_r - dx).norm() < 1e-8);
    const ErrorState21 back_l = extract_error_left(inject_error_left(s, dx), s);
    CHECK((back_l - dx).norm() < 1e-8);
    const ErrorState21 back_e =
        extract_error_esekf(inject_error_esekf(s, dx), s);
    CHECK((back_e - dx).norm() < 1e-8);
  }
}

TEST_CASE("extract of equal states is zero") {
  std::mt19937 rng(11);
  const FullState s = random_state(rng);
  CHECK(extract_error_right(s, s).norm() < 1e-12);
  CHECK(extract_error_left(s, s).norm() < 1e-12);
}

TEST_CASE("pure bias offset extracts into the bias block only") {
  std::mt19937 rng(13);
  const FullState s = random_state(rng);
  FullState t = s;
  t.b_g += Vec3(0.01, -0.02, 0.03);
  const ErrorState21 dx = extract_error_right(t, s);
  CHECK((dx.segment<3>(kIdxBg) - Vec3(0.01, -0.02, 0.03)).norm() < 1e-14);
  for (int i = 0; i < kErrorDim; ++i) {
    if (i >= kIdxBg && i < kIdxBg + 3) continue;
    CHECK(std::abs(dx(i)) < 1e-12);
  }
}

TEST_CASE("left injection with zero rotation error is plain body translation") {
  std::mt19937 rng(17);
  const FullState s = random_state(rng);
  ErrorState21 dx = ErrorState21::Zero();
  dx.segment<3>(kIdxVel) = Vec3(1.0, -2.0, 0.5);
  const FullState out = inject_error_left(s, dx);
  CHECK(out.v_n.isApprox(s.v_n + s.R_bn * Vec3(1.0, -2.0, 0.5), 1e-14));
}

TEST_CASE("left and right injection agree at the identity state") {
  std::mt19937 rng(19);
  const ErrorState21 dx = random_error(rng, 0.3);
  const FullState id;
  const FullState r = inject_error_right(id, dx);
  const FullState l = inject_error_left(id, dx);
  CHECK(r.R_bn.isApprox(l.R_bn, 1e-12));
  CHECK(r.v_n.isApprox(l.v_n, 1e-12));
  CHECK(r.p_n.isApprox(l.p_n, 1e-12));
}

TEST_CASE("right error is invariant to a common right translation") {
  std::mt19937 rng(23);
  for (int i = 0; i < 50; ++i) {
    const FullState est = random_state(rng);
    const ErrorState21 dx = random_error(rng, 0.25);
    const FullState truth = inject_error_right(est, dx);

    SE23Element gamma;
    gamma.R = test::random_rotation(rng);
    gamma.v = random_vec(rng, 5.0);
    gamma.p = random_vec(rng, 5.0);

    auto translate = [&](const FullState& s) {
      const SE23Element moved = s.pose() * gamma;
      FullState out = s;
      out.R_bn = moved.R;
      out.v_n = moved.v;
      out.p_n = moved.p;
      return out;
    };
    const ErrorState21 dx2 =
        extract_error_right(translate(truth), translate(est));
    CHECK((dx2.segment<9>(0) - dx.segment<9>(0)).norm() < 1e-9);
  }
}

TEST_CASE("injection keeps rotations orthonormal") {
  std::mt19937 rng(29);
  for (int i = 0; i < 100; ++i) {
    const FullState s = random_state(rng);
    const ErrorState21 dx = random_error(rng, 0.3);
    const FullState out = inject_error_right(s, dx);
    CHECK((out.R_bn.transpose() * out.R_bn - Mat3::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((out.R_ab.transpose() * out.R_ab - Mat3::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("state validity checks") {
  FullState s;
  CHECK(s.valid());
  s.v_n.x() = NAN;
  CHECK_FALSE(s.valid());
  s = FullState{};
  s.R_bn(0, 0) = 2.0;
  CHECK_FALSE(s.valid());
}
