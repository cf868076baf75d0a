#include "test_support.hpp"

#include <cmath>
#include <random>

#include "deptext/classical.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace deptext;
using oracle::multinomial_oracle;
using oracle::gaussian_oracle;

TEST_CASE("multinomial laplace arithmetic and priors") {
  Matrix x(2, 2);
  x << 1, 0,
       0, 1;
  const NbModel m = fit_nb(NbKind::Multinomial, x, std::vector<int>{0, 1}, 1.0);
  CHECK(std::exp(m.log_likelihood(0, 0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(std::exp(m.log_likelihood(0, 1)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.priors[0] == 0.5);
  CHECK(m.priors[1] == 0.5);
  for (int c = 0; c < 2; ++c) CHECK(std::abs(m.log_likelihood.row(c).array().exp().sum() - 1.0) < 1e-12);

  const auto toy = fixtures::nb_toy();
  std::vector<int> skewed = {0, 0, 0, 0, 1, 1};
  const NbModel s = fit_nb(NbKind::Multinomial, toy.counts, skewed, 1.0);
  const NbPrediction zero = predict_nb(s, Vector::Zero(4));
  CHECK(zero.label == 0);
  CHECK(std::abs(zero.log_posterior[0] - std::log(4.0 / 6.0)) < 1e-12);
}

TEST_CASE("naive bayes errors") {
  Matrix x(2, 2);
  x << 1, -1,
       0, 1;
  CHECK_THROWS_KIND(fit_nb(NbKind::Multinomial, x, std::vector<int>{0, 1}), ErrorKind::NegativeFeature);
  CHECK_THROWS_KIND(fit_nb(NbKind::Gaussian, x, std::vector<int>{1, 1}), ErrorKind::SingleClass);
  CHECK_THROWS_KIND(fit_nb(NbKind::Gaussian, x, std::vector<int>{1}), ErrorKind::LengthMismatch);
  CHECK_THROWS_KIND(fit_nb(NbKind::Gaussian, x, std::vector<int>{1, 2}), ErrorKind::LabelOutOfRange);
  const NbModel g = fit_nb(NbKind::Gaussian, x, std::vector<int>{0, 1});
  CHECK_THROWS_KIND(predict_nb(g, Vector::Zero(3)), ErrorKind::DimensionMismatch);
}

TEST_CASE("six-document toy corpus against a brute-force Bayes evaluator") {
  const auto toy = fixtures::nb_toy();
  const NbModel mn = fit_nb(NbKind::Multinomial, toy.counts, toy.labels, 1.0);
  const NbModel gs = fit_nb(NbKind::Gaussian, toy.counts, toy.labels, 1.0);
  for (Index i = 0; i < toy.counts.rows(); ++i) {
    const Vector x = toy.counts.row(i).transpose();
    const auto om = multinomial_oracle(toy.counts, toy.labels, 1.0, x);
    const auto og = gaussian_oracle(toy.counts, toy.labels, x);
    const auto pm = predict_nb(mn, x);
    const auto pg = predict_nb(gs, x);
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(pm.log_posterior[static_cast<std::size_t>(c)] - om[static_cast<std::size_t>(c)]) < 1e-12);
      CHECK(std::abs(pg.log_posterior[static_cast<std::size_t>(c)] - og[static_cast<std::size_t>(c)]) < 1e-12);
    }
  }

  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> count(0, 5);
  std::normal_distribution<double> real(2.0, 1.5);
  int probes = 0;
  while (probes < 100) {
    Vector xc(4), xg(4);
    for (int j = 0; j < 4; ++j) {
      xc[j] = count(gen);
      xg[j] = real(gen);
    }
    const auto om = multinomial_oracle(toy.counts, toy.labels, 1.0, xc);
    const auto og = gaussian_oracle(toy.counts, toy.labels, xg);
    if (std::abs(om[0] - om[1]) < 1e-9 || std::abs(og[0] - og[1]) < 1e-9) continue;  // keep probes tie-free
    ++probes;
    CHECK(predict_nb(mn, xc).label == (om[1] > om[0] ? 1 : 0));
    CHECK(predict_nb(gs, xg).label == (og[1] > og[0] ? 1 : 0));
    const auto pm = predict_nb(mn, xc);
    const auto pg = predict_nb(gs, xg);
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(pm.log_posterior[static_cast<std::size_t>(c)] - om[static_cast<std::size_t>(c)]) < 1e-12);
      CHECK(std::abs(pg.log_posterior[static_cast<std::size_t>(c)] - og[static_cast<std::size_t>(c)]) < 1e-12);
    }
  }
}

TEST_CASE("sparse and dense multinomial paths agree") {
  const auto toy = fixtures::nb_toy();
  std::vector<SparseVector> sparse;
  for (Index i = 0; i < toy.counts.rows(); ++i) sparse.push_back(toy.counts.row(i).transpose().sparseView());
  const NbModel a = fit_nb(NbKind::Multinomial, toy.counts, toy.labels, 0.5);
  const NbModel b = fit_nb(NbKind::Multinomial, sparse, toy.labels, 0.5);
  CHECK((a.log_likelihood - b.log_likelihood).cwiseAbs().maxCoeff() < 1e-15);
  for (const auto& v : sparse) {
    const auto pa = predict_nb(a, Vector(v));
    const auto pb = predict_nb(b, v);
    CHECK(pa.label == pb.label);
    CHECK(std::abs(pa.log_posterior[1] - pb.log_posterior[1]) < 1e-12);
  }
}

TEST_CASE("gaussian nb properties") {
  Matrix x(2, 2);
  x << 0, 0,
       4, 4;
  const NbModel g = fit_nb(NbKind::Gaussian, x, std::vector<int>{0, 1});
  CHECK(g.variance_floor > 0.0);
  CHECK((g.variance.array() >= g.variance_floor).all());
  CHECK(predict_nb(g, Vector(x.row(1).transpose())).label == 1);
  // One example per class: nearest mean wins.
  Vector probe(2);
  probe << 1.5, 1.0;
  CHECK(predict_nb(g, probe).label == 0);
  probe << 2.5, 2.2;
  CHECK(predict_nb(g, probe).label == 1);
  // All-constant features fall back to the absolute floor.
  Matrix flat = Matrix::Ones(4, 3);
  const NbModel f = fit_nb(NbKind::Gaussian, flat, std::vector<int>{0, 1, 0, 1});
  CHECK(f.variance_floor == 1e-9);
}

TEST_CASE("svm basics") {
  Matrix x(2, 1);
  x << -1, 1;
  const std::vector<int> y = {0, 1};
  const SvmConfig cfg{1e-4, 100, 3};
  const SvmModel m = fit_svm(x, y, cfg);
  CHECK(predict_svm_rows(m, x) == y);
  const SvmModel again = fit_svm(x, y, cfg);
  CHECK(again.weights == m.weights);
  CHECK(again.bias == m.bias);

  SvmModel w{Vector::Ones(1), 0.0, 1e-4};
  CHECK(predict_svm(w, Vector::Constant(1, 3.0)) == 1);
  CHECK(predict_svm(w, Vector::Zero(1)) == 0);
  CHECK_THROWS_KIND(predict_svm(w, Vector::Zero(2)), ErrorKind::DimensionMismatch);
  CHECK_THROWS_KIND(fit_svm(x, std::vector<int>{1, 1}, cfg), ErrorKind::SingleClass);
}

TEST_CASE("svm on separable data and blobs") {
  const auto toy = fixtures::svm_separable();
  SvmTrace trace;
  const SvmModel m = fit_svm(toy.x, toy.labels, SvmConfig{1e-4, 100, 1}, &trace);
  CHECK(predict_svm_rows(m, toy.x) == toy.labels);
  REQUIRE(trace.epoch_objective.size() == 100);
  CHECK(svm_objective(m, toy.x, toy.labels) < trace.epoch_objective.front());
  CHECK(trace.epoch_objective.back() == svm_objective(m, toy.x, toy.labels));

  // Batch predictions equal pointwise predictions; positive rescaling of
  // (w, b) changes nothing.
  SvmModel scaled = m;
  scaled.weights *= 3.5;
  scaled.bias *= 3.5;
  for (Index i = 0; i < toy.x.rows(); ++i) {
    const Vector xi = toy.x.row(i).transpose();
    CHECK(predict_svm(m, xi) == predict_svm_rows(m, toy.x)[static_cast<std::size_t>(i)]);
    CHECK(predict_svm(scaled, xi) == predict_svm(m, xi));
  }

  std::mt19937_64 gen(6);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix blobs(200, 2);
  std::vector<int> labels;
  for (Index i = 0; i < 200; ++i) {
    const int y = static_cast<int>(i % 2);
    blobs(i, 0) = g(gen) + (y ? 2.0 : -2.0);
    blobs(i, 1) = g(gen) + (y ? 2.0 : -2.0);
    labels.push_back(y);
  }
  SvmTrace bt;
  const SvmModel bm = fit_svm(blobs, labels, SvmConfig{1e-2, 50, 4}, &bt);
  CHECK(svm_objective(bm, blobs, labels) <= bt.epoch_objective.front());
}

TEST_CASE("model checkpoints") {
  const auto dir = test::scratch_dir("classical_checkpoint");
  const auto toy = fixtures::nb_toy();
  for (NbKind kind : {NbKind::Multinomial, NbKind::Gaussian}) {
    const NbModel m = fit_nb(kind, toy.counts, toy.labels, 0.7);
    save_nb(m, dir / "nb");
    const NbModel back = load_nb(dir / "nb");
    CHECK(back.kind == kind);
    CHECK(back.priors == m.priors);
    CHECK(back.alpha == m.alpha);
    CHECK(back.variance_floor == m.variance_floor);
    const Vector probe = toy.counts.row(3).transpose();
    CHECK(predict_nb(back, probe).log_posterior == predict_nb(m, probe).log_posterior);
  }
  const auto sv = fixtures::svm_separable();
  const SvmConfig cfg{1e-3, 10, 2};
  const SvmModel s = fit_svm(sv.x, sv.labels, cfg);
  save_svm(s, cfg, dir / "svm");
  const SvmModel sb = load_svm(dir / "svm");
  CHECK(sb.weights == s.weights);
  CHECK(sb.bias == s.bias);
  CHECK(sb.lambda == s.lambda);
}
