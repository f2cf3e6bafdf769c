#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/synth.hpp"
#include "svmap/errors.hpp"
#include "svmap/evaluation.hpp"
#include "svmap/solver.hpp"

using namespace svmap;
using namespace svmap::testsup;

TEST_CASE("hinge_loss definition") {
    CHECK(hinge_loss(2.0, 1) == 0.0);
    CHECK(hinge_loss(0.0, 1) == 1.0);
    CHECK(hinge_loss(0.0, -1) == 1.0);
    CHECK(hinge_loss(-0.5, 1) == 1.5);
    CHECK_THROWS_AS(hinge_loss(1.0, 0), DataError);
}

TEST_CASE("hinge_loss nonnegativity and zero condition") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 300; ++trial) {
        double f = 6.0 * sym_uniform(rng);
        int y = rng() % 2 == 0 ? 1 : -1;
        double loss = hinge_loss(f, y);
        CHECK(loss >= 0.0);
        CHECK((loss == 0.0) == (y * f >= 1.0));
    }
}

TEST_CASE("empirical_risk is the mean of per-sample hinge losses") {
    Dataset d = random_binary_blobs(25, 3, 44);
    TrainConfig c;
    SvmModel m = train_svm(d, c);

    // naive independent recomputation
    double naive = 0.0;
    for (const Sample& s : d.samples) {
        double f = m.bias;
        for (std::size_t v = 0; v < m.support_vectors.size(); ++v) {
            double dot = 0.0;
            for (std::size_t j = 0; j < d.dim; ++j)
                dot += m.support_vectors[v].features[j] * s.features[j];
            f += m.alphas[v] * m.support_vectors[v].label * dot;
        }
        naive += std::max(0.0, 1.0 - s.label * f);
    }
    naive /= static_cast<double>(d.size());

    CHECK(empirical_risk(m, d) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("empirical_risk: single boundary sample costs exactly 1") {
    SvmModel m;  // empty model, bias 0 -> f(x) = 0
    Dataset d;
    d.dim = 1;
    d.samples = {{0, {0.3}, 1}};
    CHECK(empirical_risk(m, d) == 1.0);
    Dataset empty;
    CHECK_THROWS_AS(empirical_risk(m, empty), DataError);
}

TEST_CASE("accuracy counting") {
    Dataset d;
    d.dim = 1;
    d.samples = {{0, {1.0}, 1}, {1, {2.0}, 1}, {2, {-1.0}, -1}, {3, {0.5}, -1}};
    SvmModel m;  // sign(0 + w.x) with no SVs: f = bias = 0 -> predicts +1
    m.bias = 1.0;
    CHECK(accuracy(m, d) == 0.5);  // the two +1 samples are right
    m.bias = -1.0;
    CHECK(accuracy(m, d) == 0.5);
    Dataset empty;
    CHECK_THROWS_AS(accuracy(m, empty), DataError);
}

TEST_CASE("cv csv emitter format") {
    CvReport r;
    r.folds = 10;
    r.seed = 7;
    r.per_iteration = {{1, 0.5, 0.625, 0.375, 12.5}, {2, 0.25, 0.5, 0.0, 20.0}};
    std::ostringstream out;
    write_cv_csv(r, out);
    CHECK(out.str() ==
          "iter,loss_mean,loss_mean_plus_sigma,loss_mean_minus_sigma,mean_sv_count\n"
          "1,0.5,0.625,0.375,12.5\n"
          "2,0.25,0.5,0,20\n");
}

TEST_CASE("speedup csv emitter format") {
    SpeedupReport r;
    r.repeats = 5;
    r.rows = {{1, 2.0, 1.0}, {2, 1.0, 2.0}};
    std::ostringstream out;
    write_speedup_csv(r, out);
    CHECK(out.str() ==
          "L,wall_time_s,speedup\n"
          "1,2,1\n"
          "2,1,2\n");
}
