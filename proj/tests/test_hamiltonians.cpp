#include "qdomino/hamiltonians.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace qdomino;

namespace {

double max_abs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

ModelSpec model(ModelKind kind, double omega1 = 0.15, int m = 1,
                Variant v = Variant::normalized) {
  ModelSpec s;
  s.model = kind;
  s.omega1 = omega1;
  s.m_neighbors = m;
  s.variant = v;
  return s;
}

/// Conjugates H by the basis permutation that moves site k to site target(k).
template <class F> Matrix relabel(const Operator &h, F target) {
  const int n = h.spins();
  const auto dim = h.dim();
  Eigen::PermutationMatrix<Eigen::Dynamic> p(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    Eigen::Index image = 0;
    for (int k = 1; k <= n; ++k)
      if (!is_up(static_cast<std::uint64_t>(b), n, k))
        image |= static_cast<Eigen::Index>(site_mask(n, target(k)));
    p.indices()(b) = static_cast<int>(image);
  }
  return p * h.matrix() * p.transpose();
}

Matrix reflect(const Operator &h) {
  const int n = h.spins();
  return relabel(h, [n](int k) { return n + 1 - k; });
}

Matrix shift(const Operator &h) {
  const int n = h.spins();
  return relabel(h, [n](int k) { return wrap_site(n, k + 1); });
}

/// Coefficient of a product of spin operators in the expansion of H.
double coefficient(const Operator &h, const std::vector<SiteFactor> &f) {
  const auto p = product_operator(h.spins(), f, 1.0);
  return ((p.matrix().adjoint() * h.matrix()).trace() /
          (p.matrix().adjoint() * p.matrix()).trace())
      .real();
}

Vector all_up(int n) {
  Vector v = Vector::Zero(hilbert_dim(n));
  v(0) = 1;
  return v;
}

} // namespace

TEST(RotatingZZ, TwoSpinMatrix) {
  const double w = 0.3, d1 = 1.7;
  auto m = model(ModelKind::rotating_zz, w);
  m.d1 = d1;
  const auto h = build_rotating_zz(SystemSpec::uniform(2, Geometry::chain), m);
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << d1 / 4, -d1 / 4, -d1 / 4, d1 / 4;
  for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}}) expected(a, b) = expected(b, a) = w / 2;
  EXPECT_LT(max_abs(h.matrix() - expected), 1e-15);
}

TEST(RotatingZZ, ChainMatchesKroneckerConstruction) {
  for (int n = 2; n <= 6; ++n)
    for (int m = 1; m <= n - 1; ++m) {
      const auto h = build_rotating_zz(SystemSpec::uniform(n, Geometry::chain),
                                       model(ModelKind::rotating_zz, 0.15, m));
      EXPECT_LT(max_abs(h.matrix() - oracle::rotating_zz_chain(n, 0.15, m)), 1e-14);
    }
}

TEST(RotatingZZ, NearestNeighborChainHasSixBonds) {
  const auto sys = SystemSpec::uniform(7, Geometry::chain);
  const auto h = build_rotating_zz(sys, model(ModelKind::rotating_zz, 0.15, 1));
  int bonds = 0;
  for (int a = 1; a <= 7; ++a)
    for (int b = a + 1; b <= 7; ++b)
      if (std::abs(coefficient(h, {{a, SpinAxis::z}, {b, SpinAxis::z}})) > 1e-12) ++bonds;
  EXPECT_EQ(bonds, 6);
  EXPECT_TRUE(h.is_hermitian());
}

TEST(RotatingZZ, AllPairsUseProfileCouplings) {
  const int n = 6;
  const auto h = build_rotating_zz(SystemSpec::uniform(n, Geometry::chain),
                                   model(ModelKind::rotating_zz, 0.15, n - 1));
  const auto table = coupling_profile(Geometry::chain, n, 1.0, n - 1);
  EXPECT_EQ(table.pairs.size(), static_cast<size_t>(n * (n - 1) / 2));
  for (const auto &p : table.pairs)
    EXPECT_NEAR(coefficient(h, {{p.first, SpinAxis::z}, {p.second, SpinAxis::z}}), p.d, 1e-14);
}

TEST(RotatingZZ, RingMatchesKroneckerAndIsCyclic) {
  for (int n : {5, 6}) {
    for (int m = 1; m <= n / 2; ++m) {
      const auto h = build_rotating_zz(SystemSpec::uniform(n, Geometry::ring),
                                       model(ModelKind::rotating_zz, 0.15, m));
      EXPECT_LT(max_abs(h.matrix() - oracle::rotating_zz_ring(n, 0.15, m)), 1e-14);
    }
  }
  const auto h9 = build_rotating_zz(SystemSpec::uniform(9, Geometry::ring),
                                    model(ModelKind::rotating_zz, 0.15, 4));
  EXPECT_LT(max_abs(shift(h9) - h9.matrix()), 1e-12);
  EXPECT_LT(max_abs(reflect(h9) - h9.matrix()), 1e-12);
}

TEST(RotatingZZ, RejectsWrongModelAndRange) {
  const auto sys = SystemSpec::uniform(5, Geometry::chain);
  EXPECT_THROW(build_rotating_zz(sys, model(ModelKind::effective_nn)), InvalidArgument);
  EXPECT_THROW(build_rotating_zz(sys, model(ModelKind::rotating_zz, 0.15, 5)), InvalidArgument);
  EXPECT_THROW(build_rotating_zz(SystemSpec::uniform(5, Geometry::ring),
                                 model(ModelKind::rotating_zz, 0.15, 3)),
               InvalidArgument);
}

TEST(EffectiveNN, TwoSpinsIsZero) {
  const auto h = build_effective_nn(SystemSpec::uniform(2, Geometry::chain),
                                    model(ModelKind::effective_nn));
  EXPECT_EQ(max_abs(h.matrix()), 0.0);
}

TEST(EffectiveNN, AllUpIsAnnihilated) {
  for (int n = 3; n <= 8; ++n) {
    const auto h = build_effective_nn(SystemSpec::uniform(n, Geometry::chain),
                                      model(ModelKind::effective_nn));
    EXPECT_LT((h.matrix() * all_up(n)).norm(), 1e-15);
  }
}

TEST(EffectiveNN, ThreeSpinFlipElement) {
  const double w = 0.37;
  const auto h = build_effective_nn(SystemSpec::uniform(3, Geometry::chain),
                                    model(ModelKind::effective_nn, w));
  // <down down up| H |down up up>: 0b110 and 0b100
  EXPECT_NEAR(h(0b110, 0b100).real(), w / 2, 1e-15);
  EXPECT_NEAR(oracle::effective_nn(3, w)(0b110, 0b100).real(), w / 2, 1e-15);
}

TEST(EffectiveNN, MatchesPauliFormAndIsReflectionSymmetric) {
  for (int n = 3; n <= 7; ++n) {
    const auto h = build_effective_nn(SystemSpec::uniform(n, Geometry::chain),
                                      model(ModelKind::effective_nn, 0.15));
    EXPECT_LT(max_abs(h.matrix() - oracle::effective_nn(n, 0.15)), 1e-14);
    EXPECT_LT(max_abs(reflect(h) - h.matrix()), 1e-14);
  }
}

TEST(EffectiveNN, RejectsRing) {
  EXPECT_THROW(build_effective_nn(SystemSpec::uniform(5, Geometry::ring),
                                  model(ModelKind::effective_nn)),
               InvalidArgument);
}

TEST(EffectiveChain, NearestNeighborNormalizedKeepsAllUpStationary) {
  for (int n = 3; n <= 8; ++n) {
    const auto h = build_effective_chain(SystemSpec::uniform(n, Geometry::chain),
                                         model(ModelKind::effective_chain, 0.15, 1));
    // only D1 (I_1^z + I_N^z) acts on |up...up>
    EXPECT_LT((h.matrix() * all_up(n) - 1.0 * all_up(n)).norm(), 1e-15);
  }
}

TEST(EffectiveChain, NearestNeighborStructure) {
  const int n = 7;
  const double w = 0.2;
  const auto sys = SystemSpec::uniform(n, Geometry::chain);
  const auto norm = build_effective_chain(sys, model(ModelKind::effective_chain, w, 1));
  const auto printed =
      build_effective_chain(sys, model(ModelKind::effective_chain, w, 1, Variant::as_printed));
  for (int k = 2; k <= 6; ++k) {
    EXPECT_NEAR(coefficient(norm, {{k, SpinAxis::x}}), w / 2, 1e-15);
    EXPECT_NEAR(coefficient(norm, {{k, SpinAxis::x}, {k - 1, SpinAxis::z}, {k + 1, SpinAxis::z}}),
                -2 * w, 1e-15);
  }
  EXPECT_NEAR(coefficient(norm, {{1, SpinAxis::z}}), 1.0, 1e-15);
  EXPECT_NEAR(coefficient(norm, {{7, SpinAxis::z}}), 1.0, 1e-15);
  EXPECT_NEAR(coefficient(norm, {{1, SpinAxis::x}}), w / 4, 1e-15);
  EXPECT_NEAR(coefficient(norm, {{7, SpinAxis::x}}), w / 4, 1e-15);
  EXPECT_NEAR(coefficient(norm, {{1, SpinAxis::x}, {2, SpinAxis::z}}), -w / 2, 1e-15);
  EXPECT_NEAR(coefficient(norm, {{7, SpinAxis::x}, {6, SpinAxis::z}}), -w / 2, 1e-15);
  // as typeset: (1 - I_{N-1}^z) on the last spin
  EXPECT_NEAR(coefficient(printed, {{7, SpinAxis::x}, {6, SpinAxis::z}}), -w / 4, 1e-15);
  EXPECT_NEAR(coefficient(printed, {{1, SpinAxis::x}, {2, SpinAxis::z}}), -w / 2, 1e-15);
}

TEST(EffectiveChain, NextNearestZeemanEndTerms) {
  const auto h = build_effective_chain(SystemSpec::uniform(7, Geometry::chain),
                                       model(ModelKind::effective_chain, 0.15, 2, Variant::as_printed));
  EXPECT_NEAR(coefficient(h, {{1, SpinAxis::z}}), 7.0 / 16, 1e-15);
  EXPECT_NEAR(coefficient(h, {{7, SpinAxis::z}}), 7.0 / 16, 1e-15);
  EXPECT_NEAR(coefficient(h, {{2, SpinAxis::z}}), -1.0 / 16, 1e-15);
  EXPECT_NEAR(coefficient(h, {{6, SpinAxis::z}}), -1.0 / 16, 1e-15);
  // printed I_N^x factor carries +I_{N-3}^z
  EXPECT_NEAR(coefficient(h, {{7, SpinAxis::x}, {4, SpinAxis::z}}), 0.15 / 4, 1e-15);
}

TEST(EffectiveChain, NextNearestInteriorGates) {
  const int n = 7;
  const auto h = build_effective_chain(SystemSpec::uniform(n, Geometry::chain),
                                       model(ModelKind::effective_chain, 0.15, 2));
  // interior spins 3..5 see both gates vanish on |up...up>
  for (int k = 3; k <= 5; ++k) {
    const auto term = coefficient(h, {{k, SpinAxis::x}});
    EXPECT_NEAR(term, 0.15 / 2, 1e-15);
  }
  // the typeset I_1^x factor evaluates to 1/2 on aligned neighbors
  Vector up = all_up(n);
  Vector flip1 = Vector::Zero(hilbert_dim(n));
  flip1(static_cast<Eigen::Index>(site_mask(n, 1))) = 1;
  EXPECT_NEAR(flip1.dot(h.matrix() * up).real(), 0.15 / 4 * 0.5 * 0.5, 1e-15);
}

TEST(EffectiveChain, ReflectionSymmetryOnlyForNormalized) {
  const auto sys = SystemSpec::uniform(7, Geometry::chain);
  for (int m : {1, 2}) {
    const auto norm = build_effective_chain(sys, model(ModelKind::effective_chain, 0.15, m));
    const auto printed =
        build_effective_chain(sys, model(ModelKind::effective_chain, 0.15, m, Variant::as_printed));
    EXPECT_LT(max_abs(reflect(norm) - norm.matrix()), 1e-14) << "M=" << m;
    EXPECT_GT(max_abs(reflect(printed) - printed.matrix()), 1e-3) << "M=" << m;
  }
}

TEST(EffectiveChain, OnlyOneOrTwoNeighbors) {
  const auto sys = SystemSpec::uniform(7, Geometry::chain);
  try {
    build_effective_chain(sys, model(ModelKind::effective_chain, 0.15, 3));
    FAIL() << "expected an error";
  } catch (const InvalidArgument &e) {
    EXPECT_STREQ(e.what(), "m_neighbors must be 1 or 2");
  }
  EXPECT_THROW(build_effective_chain(SystemSpec::uniform(7, Geometry::ring),
                                     model(ModelKind::effective_chain, 0.15, 1)),
               InvalidArgument);
}

TEST(EffectiveRing, NormalizedAnnihilatesAllUp) {
  for (int n : {3, 4, 5, 6, 7, 9})
    for (int m = 1; m <= n / 2; ++m) {
      const auto h = build_effective_ring(SystemSpec::uniform(n, Geometry::ring),
                                          model(ModelKind::effective_ring, 0.15, m));
      EXPECT_LT((h.matrix() * all_up(n)).norm(), 1e-15) << "n=" << n << " M=" << m;
    }
}

TEST(EffectiveRing, AsPrintedMovesAllUp) {
  const double w = 0.15;
  const auto h = build_effective_ring(SystemSpec::uniform(4, Geometry::ring),
                                      model(ModelKind::effective_ring, w, 1, Variant::as_printed));
  const Vector out = h.matrix() * all_up(4);
  EXPECT_GT(out.norm(), 0.0);
  // (w/4) (1 - 1/4) (1/2) onto each single flip
  EXPECT_NEAR(out(static_cast<Eigen::Index>(site_mask(4, 1))).real(), w / 4 * 0.75 * 0.5, 1e-15);
}

TEST(EffectiveRing, CyclicAndMirrorInvariant) {
  const auto h = build_effective_ring(SystemSpec::uniform(9, Geometry::ring),
                                      model(ModelKind::effective_ring, 0.15, 1));
  EXPECT_LT(max_abs(shift(h) - h.matrix()), 1e-12);
  EXPECT_LT(max_abs(reflect(h) - h.matrix()), 1e-12);
}

TEST(EffectiveRing, NearestNeighborMatchesChainInteriorForm) {
  // On a ring every spin is interior: same gated flip as the chain average
  // Hamiltonian, with cyclic neighbors.
  const int n = 5;
  const auto h = build_effective_ring(SystemSpec::uniform(n, Geometry::ring),
                                      model(ModelKind::effective_ring, 0.15, 1));
  for (int k = 1; k <= n; ++k)
    EXPECT_NEAR(coefficient(h, {{k, SpinAxis::x},
                                {wrap_site(n, k - 1), SpinAxis::z},
                                {wrap_site(n, k + 1), SpinAxis::z}}),
                -2 * 0.15, 1e-15);
  EXPECT_THROW(build_effective_ring(SystemSpec::uniform(5, Geometry::chain),
                                    model(ModelKind::effective_ring, 0.15, 1)),
               InvalidArgument);
}

TEST(SecularDipolar, TwoSpinMatrix) {
  const double d = 1.3;
  auto m = model(ModelKind::secular_dipolar, 0.0);
  m.d1 = d;
  const auto h = build_secular_dipolar(SystemSpec::uniform(2, Geometry::chain), m);
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << d / 4, -d / 4, -d / 4, d / 4;
  expected(1, 2) = expected(2, 1) = -d / 4;
  EXPECT_LT(max_abs(h.matrix() - expected), 1e-15);
}

TEST(SecularDipolar, ConservesTotalZ) {
  for (auto [n, g] : {std::pair{5, Geometry::chain}, {6, Geometry::ring}}) {
    const auto h = build_secular_dipolar(SystemSpec::uniform(n, g), model(ModelKind::secular_dipolar, 0.0));
    const auto z = Operator::diagonal(n, total_z_values(n));
    EXPECT_LT(max_abs(commutator(h, z).matrix()), 1e-12);
  }
}

TEST(SecularDipolar, MatchesKroneckerConstruction) {
  for (int n = 2; n <= 5; ++n)
    for (double w : {0.0, 0.15}) {
      const auto h = build_secular_dipolar(SystemSpec::uniform(n, Geometry::chain),
                                           model(ModelKind::secular_dipolar, w));
      EXPECT_LT(max_abs(h.matrix() - oracle::secular_dipolar_chain(n, w)), 1e-14);
    }
}

TEST(SecularDipolar, RequiresSingleSpecies) {
  EXPECT_THROW(build_secular_dipolar(SystemSpec::patterned(4, Geometry::chain, "HF"),
                                     model(ModelKind::secular_dipolar)),
               InvalidArgument);
}

TEST(AlternatingHetero, UnlikePairHasNoFlipFlop) {
  const auto h = build_alternating_hetero(SystemSpec::patterned(2, Geometry::chain, "HF"),
                                          model(ModelKind::alternating_hetero, 0.0));
  EXPECT_EQ(h(1, 2), complex(0.0));
  EXPECT_NEAR(h(0, 0).real(), 0.25, 1e-15); // normalized nearest-neighbor ZZ = d1
}

TEST(AlternatingHetero, LikePairCouplingScalesWithGammaRatio) {
  const auto sys = SystemSpec::patterned(3, Geometry::chain, "HF");
  const auto table = heteronuclear_couplings(sys, 1.0);
  const double expected = (kGammaProton / kGammaFluorine) / 8.0;
  EXPECT_NEAR(table(1, 3), expected, 1e-15);
  EXPECT_NEAR(table(1, 3), 0.13281, 1e-4);
  EXPECT_NEAR(table(1, 2), 1.0, 1e-15);
  const auto h = build_alternating_hetero(sys, model(ModelKind::alternating_hetero, 0.0));
  EXPECT_NEAR(coefficient(h, {{1, SpinAxis::z}, {3, SpinAxis::z}}), expected, 1e-14);
  EXPECT_NEAR(coefficient(h, {{1, SpinAxis::x}, {3, SpinAxis::x}}), -expected / 2, 1e-14);
  EXPECT_NEAR(coefficient(h, {{1, SpinAxis::x}, {2, SpinAxis::x}}), 0.0, 1e-15);
}

TEST(AlternatingHetero, GyromagneticRatios) {
  EXPECT_EQ(kGammaProton, 42.58);
  EXPECT_EQ(kGammaFluorine, 40.08);
}

TEST(AlternatingHetero, MatchesKroneckerConstruction) {
  const double h = kGammaProton, f = kGammaFluorine;
  const auto op = build_alternating_hetero(SystemSpec::patterned(5, Geometry::chain, "HF"),
                                           model(ModelKind::alternating_hetero, 0.15));
  EXPECT_LT(max_abs(op.matrix() - oracle::alternating_chain({h, f, h, f, h}, 0.15)), 1e-13);
  EXPECT_LT(max_abs(reflect(op) - op.matrix()), 1e-13);
}

TEST(AlternatingHetero, OddRingDefectIsReported) {
  const auto ring = SystemSpec::patterned(7, Geometry::ring, "HF");
  const auto defects = ring.like_neighbor_defects();
  ASSERT_EQ(defects.size(), 1u);
  EXPECT_EQ(defects[0], std::make_pair(7, 1));
  EXPECT_TRUE(SystemSpec::patterned(7, Geometry::chain, "HF").like_neighbor_defects().empty());
  EXPECT_TRUE(SystemSpec::patterned(8, Geometry::ring, "HF").like_neighbor_defects().empty());
  // the defect bond keeps its flip-flop term
  const auto h = build_alternating_hetero(ring, model(ModelKind::alternating_hetero, 0.0));
  EXPECT_LT(coefficient(h, {{7, SpinAxis::x}, {1, SpinAxis::x}}), -0.1);
}

TEST(AlternatingHetero, Errors) {
  auto sys = SystemSpec::patterned(4, Geometry::chain, "HX", {{"H", 1.0}});
  EXPECT_THROW(build_alternating_hetero(sys, model(ModelKind::alternating_hetero)), InvalidArgument);
  EXPECT_THROW(build_alternating_hetero(SystemSpec::uniform(4, Geometry::chain),
                                        model(ModelKind::alternating_hetero)),
               InvalidArgument);
}

TEST(LabFrame, DriveVanishesAtQuarterPeriod) {
  ModelSpec m = model(ModelKind::lab_frame, 0.1);
  m.omega0 = 50.0;
  const auto sys = SystemSpec::uniform(3, Geometry::chain);
  const auto h = build_lab_frame(sys, m, std::numbers::pi / (2 * m.omega0));
  EXPECT_LT((h.matrix() - Matrix(h.matrix().diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LabFrame, SingleSpin) {
  ModelSpec m = model(ModelKind::lab_frame, 0.1);
  m.omega0 = 5.0;
  const auto h = build_lab_frame(SystemSpec::uniform(1, Geometry::chain), m, 0.0);
  const Matrix expected = (m.omega0 / 2) * pauli_matrix(SpinAxis::z) + m.omega1 * pauli_matrix(SpinAxis::x);
  EXPECT_LT(max_abs(h.matrix() - expected), 1e-15);
}

TEST(LabFrame, PauliConvention) {
  ModelSpec m = model(ModelKind::lab_frame, 0.1);
  m.omega0 = 5.0;
  m.j_coupling = 0.7;
  const int n = 3;
  const double t = 0.3;
  const auto h = build_lab_frame(SystemSpec::uniform(n, Geometry::chain), m, t);
  oracle::Mat expected = oracle::Mat::Zero(8, 8);
  for (int i = 1; i <= n; ++i) {
    expected += (m.omega0 / 2) * 2.0 * oracle::site(n, i, 'z');
    expected += m.omega1 * std::cos(m.omega0 * t) * 2.0 * oracle::site(n, i, 'x');
  }
  for (int i = 1; i < n; ++i)
    expected += (m.j_coupling / 4) * 4.0 * oracle::site(n, i, 'z') * oracle::site(n, i + 1, 'z');
  EXPECT_LT(max_abs(h.matrix() - expected), 1e-14);
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_EQ(h.dim(), 8);
}

TEST(LabFrame, Preconditions) {
  ModelSpec m = model(ModelKind::lab_frame, 0.1);
  EXPECT_THROW(build_lab_frame(SystemSpec::uniform(3, Geometry::chain), m, 0.0), InvalidArgument);
  m.omega0 = 10;
  EXPECT_THROW(build_lab_frame(SystemSpec::uniform(3, Geometry::ring), m, 0.0), InvalidArgument);
  EXPECT_THROW(build_hamiltonian(SystemSpec::uniform(3, Geometry::chain), m), InvalidArgument);
}

TEST(Builders, AllHermitian) {
  const std::vector<std::pair<SystemSpec, ModelSpec>> cases{
      {SystemSpec::uniform(7, Geometry::chain), model(ModelKind::rotating_zz, 0.15, 3)},
      {SystemSpec::uniform(7, Geometry::ring), model(ModelKind::rotating_zz, 0.15, 3)},
      {SystemSpec::uniform(7, Geometry::chain), model(ModelKind::effective_nn)},
      {SystemSpec::uniform(7, Geometry::chain), model(ModelKind::effective_chain, 0.15, 2)},
      {SystemSpec::uniform(7, Geometry::chain),
       model(ModelKind::effective_chain, 0.15, 2, Variant::as_printed)},
      {SystemSpec::uniform(8, Geometry::ring), model(ModelKind::effective_ring, 0.15, 4)},
      {SystemSpec::uniform(7, Geometry::ring),
       model(ModelKind::effective_ring, 0.15, 2, Variant::as_printed)},
      {SystemSpec::uniform(7, Geometry::ring), model(ModelKind::secular_dipolar, 0.5)},
      {SystemSpec::patterned(7, Geometry::ring, "HF"), model(ModelKind::alternating_hetero)},
  };
  for (const auto &[sys, m] : cases) {
    const auto h = build_hamiltonian(sys, m);
    EXPECT_LT(h.hermiticity_error(), 1e-12) << model_name(m.model);
    EXPECT_EQ(h.dim(), hilbert_dim(sys.n));
  }
}
