#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "islkit/states.hpp"
#include "oracles.hpp"

using islkit::DensityMatrix;
using islkit::Error;
using islkit::matfun::Complex;
using islkit::matfun::Matrix;

TEST_CASE("validate accepts canonical states") {
    CHECK_NOTHROW(DensityMatrix::validate(Matrix::Identity(2, 2) / 2.0));
    CHECK_NOTHROW(DensityMatrix::validate(Matrix::Identity(5, 5) / 5.0));
    CHECK(islkit::mis_state().dim() == 2);
    CHECK(islkit::mis_state().purity() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate rejects each defect with its named error") {
    Matrix not_herm(2, 2);
    not_herm << 0.5, 0.3, 0.0, 0.5;
    CHECK_THROWS_WITH_AS(DensityMatrix::validate(not_herm),
                         doctest::Contains("NotHermitian"), Error);

    CHECK_THROWS_WITH_AS(DensityMatrix::validate(Matrix::Identity(2, 2)),
                         doctest::Contains("TraceNotOne"), Error);

    Matrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_WITH_AS(DensityMatrix::validate(neg), doctest::Contains("NotPSD"),
                         Error);

    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_WITH_AS(DensityMatrix::validate(rect),
                         doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("validate tolerates roundoff-scale defects") {
    Matrix nearly = Matrix::Identity(2, 2) / 2.0;
    nearly(0, 1) = Complex(1e-12, 1e-12);
    CHECK_NOTHROW(DensityMatrix::validate(nearly));
}

TEST_CASE("decompose splits into a real state plus antisymmetric imaginary part") {
    std::mt19937 rng(21);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + rep % 3;
        const DensityMatrix rho =
            DensityMatrix::validate(testoracle::random_density(d, rng));
        const islkit::RealImDecomposition dec = islkit::decompose(rho);
        // the real part is itself a valid state (validate already ran), and
        // the imaginary part is antisymmetric
        CHECK((dec.im + dec.im.transpose()).norm() <= 1e-12);
        const Matrix rebuilt =
            dec.re.matrix() + Complex(0.0, 1.0) * dec.im.cast<Complex>();
        CHECK((rebuilt - rho.matrix()).norm() <= 1e-12);
        CHECK(std::abs(dec.re.matrix().trace().real() - 1.0) <= 1e-12);
    }
}

TEST_CASE("theta state has the advertised entries") {
    const DensityMatrix rho = islkit::theta_state(M_PI / 3.0);
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rho.matrix()(0, 1).real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rho.matrix()(0, 1).imag() ==
          doctest::Approx(-std::sqrt(3.0) / 4.0).epsilon(1e-14));
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK((islkit::mis_state().matrix() - islkit::theta_state(M_PI / 2.0).matrix())
              .norm() <= 1e-15);

    CHECK_THROWS_WITH_AS(islkit::theta_state(-0.1), doctest::Contains("BadInput"),
                         Error);
    CHECK_THROWS_WITH_AS(islkit::theta_state(3.5), doctest::Contains("BadInput"),
                         Error);
}

TEST_CASE("root fidelity agrees with the closed qubit form") {
    std::mt19937 rng(22);
    for (int rep = 0; rep < 200; ++rep) {
        const Matrix a = testoracle::random_density(2, rng);
        const Matrix b = testoracle::random_density(2, rng);
        const double lib = islkit::root_fidelity(DensityMatrix::validate(a),
                                                 DensityMatrix::validate(b));
        const double ref = testoracle::qubit_root_fidelity(a, b);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("root fidelity basic identities") {
    std::mt19937 rng(23);
    const DensityMatrix rho =
        DensityMatrix::validate(testoracle::random_density(3, rng));
    const DensityMatrix sigma =
        DensityMatrix::validate(testoracle::random_density(3, rng));
    CHECK(islkit::root_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(islkit::root_fidelity(rho, sigma) ==
          doctest::Approx(islkit::root_fidelity(sigma, rho)).epsilon(1e-9));

    // orthogonal pure states: fidelity 0
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    CHECK(islkit::root_fidelity(DensityMatrix::validate(p0),
                                DensityMatrix::validate(p1)) <= 1e-10);
}

TEST_CASE("theta state vs its transpose pins the Bures angle") {
    const DensityMatrix rho = islkit::theta_state(M_PI / 3.0);
    const DensityMatrix rho_t = DensityMatrix::validate(rho.matrix().transpose().eval());
    // <psi|psi*> = cos(theta) for pure theta states, so sqrt(F) = 1/2 here.
    CHECK(islkit::root_fidelity(rho, rho_t) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(islkit::bures_angle(rho, rho_t) ==
          doctest::Approx(std::acos(0.5)).epsilon(1e-9));
}

TEST_CASE("json round trip preserves the state") {
    std::mt19937 rng(24);
    const DensityMatrix rho =
        DensityMatrix::validate(testoracle::random_density(3, rng));
    const nlohmann::json j = islkit::state_to_json(rho);
    const DensityMatrix back = islkit::state_from_json(j);
    CHECK((back.matrix() - rho.matrix()).norm() <= 1e-15);
}

TEST_CASE("json parsing is strict") {
    nlohmann::json ok = {{"dim", 2},
                         {"re", {{0.5, 0.0}, {0.0, 0.5}}},
                         {"im", {{0.0, 0.0}, {0.0, 0.0}}}};
    CHECK_NOTHROW(islkit::state_from_json(ok));

    nlohmann::json extra = ok;
    extra["comment"] = "hello";
    CHECK_THROWS_WITH_AS(islkit::state_from_json(extra), doctest::Contains("BadInput"),
                         Error);

    nlohmann::json wrong_shape = ok;
    wrong_shape["re"] = {{0.5, 0.0}};
    CHECK_THROWS_AS(islkit::state_from_json(wrong_shape), Error);

    nlohmann::json bad_dim = ok;
    bad_dim["dim"] = 3;
    CHECK_THROWS_AS(islkit::state_from_json(bad_dim), Error);

    nlohmann::json not_number = ok;
    not_number["re"][0][0] = "x";
    CHECK_THROWS_AS(islkit::state_from_json(not_number), Error);
}

TEST_CASE("file io round trips and rejects missing files") {
    const std::string path = "state_roundtrip_test.json";
    const DensityMatrix rho = islkit::mis_state();
    islkit::save_state(rho, path);
    const DensityMatrix back = islkit::load_state(path);
    CHECK((back.matrix() - rho.matrix()).norm() <= 1e-15);
    std::remove(path.c_str());

    CHECK_THROWS_WITH_AS(islkit::load_state("definitely_not_here.json"),
                         doctest::Contains("BadInput"), Error);
}
