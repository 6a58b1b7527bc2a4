#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bohrgap/errors.hpp"
#include "bohrgap/experiments.hpp"
#include "bohrgap/kronecker_search.hpp"
#include "bohrgap/prime_lattice.hpp"
#include "bohrgap/report_io.hpp"
#include "bohrgap/series_core.hpp"
#include "bohrgap/walsh_poly.hpp"

namespace py = pybind11;
using namespace bohrgap;

namespace {

ConstructionParams params_of(int M, const std::string& rho, std::optional<double> X) {
  return ConstructionParams::parse(M, rho, X);
}

TorusPoint torus_of(const std::vector<std::vector<cplx>>& blocks) {
  TorusPoint z;
  z.blocks = blocks;
  return z;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bohrgap native core";
  m.attr("SCHEMA_VERSION") = kSchemaVersion;

  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
  py::register_exception<NonPositiveEpsilon>(m, "NonPositiveEpsilon", PyExc_ValueError);

  m.def("prime_at", &prime_at, py::arg("k"));

  m.def(
      "build_level",
      [](int M, const std::string& rho, int L) {
        const auto lat = build_level(params_of(M, rho, std::nullopt), L);
        std::vector<std::vector<std::uint32_t>> idx(lat.size());
        for (std::size_t i = 0; i < lat.size(); ++i) idx[i].assign(lat.index(i).begin(), lat.index(i).end());
        return py::dict(py::arg("level") = lat.level, py::arg("r") = lat.r, py::arg("n") = lat.n,
                        py::arg("prime_blocks") = lat.prime_blocks,
                        py::arg("index") = idx);
      },
      py::arg("M"), py::arg("rho"), py::arg("L"));

  m.def(
      "structure_checks",
      [](int M, const std::string& rho, int Lmax) {
        const auto lats = build_levels(params_of(M, rho, std::nullopt), Lmax);
        py::dict out;
        for (const auto& c : {check_ordering(lats), check_block_disjointness(lats), check_bijection(lats),
                              check_interval_property(lats)})
          out[py::str(c.name)] = c.violations;
        return out;
      },
      py::arg("M"), py::arg("rho"), py::arg("Lmax"));

  m.def(
      "evaluate",
      [](std::vector<std::size_t> r, const std::vector<std::vector<cplx>>& blocks, bool cascade) {
        WalshPolynomial q(std::move(r));
        const auto z = torus_of(blocks);
        return cascade ? evaluate_cascade(q, z) : evaluate_direct(q, z);
      },
      py::arg("r"), py::arg("blocks"), py::arg("cascade") = true);

  m.def(
      "norms",
      [](std::vector<std::size_t> r) {
        WalshPolynomial q(std::move(r));
        return py::dict(py::arg("wiener") = wiener_norm(q), py::arg("sup_upper") = sup_norm_upper(q),
                        py::arg("certificate") = bh_certificate(q));
      },
      py::arg("r"));

  m.def(
      "sup_norm_lower",
      [](std::vector<std::size_t> r, std::size_t budget, std::uint64_t seed) {
        WalshPolynomial q(std::move(r));
        const auto w = sup_norm_lower_search(q, budget, seed);
        return py::dict(py::arg("value") = w.value, py::arg("point") = w.point.blocks, py::arg("tau") = w.tau);
      },
      py::arg("r"), py::arg("budget") = 200, py::arg("seed") = 0);

  m.def(
      "walsh_norm_identity_check",
      [](std::size_t r1, std::size_t r2, const std::vector<cplx>& v) { return walsh_norm_identity_check(r1, r2, v); },
      py::arg("r1"), py::arg("r2"), py::arg("v"));

  m.def(
      "epsilon",
      [](int M, const std::string& rho) { return epsilon_for_convergence(params_of(M, rho, std::nullopt)); },
      py::arg("M"), py::arg("rho"));

  m.def(
      "partial_sum",
      [](int M, const std::string& rho, int Lmax, cplx s) {
        DirichletSeries f(params_of(M, rho, std::nullopt), Lmax);
        const auto tr = partial_sum_trace(f, s, std::numeric_limits<std::size_t>::max());
        std::vector<cplx> boundaries;
        for (int L = 1; L <= Lmax; ++L) boundaries.push_back(*tr.boundary_value(L));
        return boundaries;
      },
      py::arg("M"), py::arg("rho"), py::arg("Lmax"), py::arg("s"));

  // reports as JSON text; the Python layer decodes them
  m.def(
      "bounds_json",
      [](int M, const std::string& rho) {
        return envelope("bounds", json(abscissa_bounds(params_of(M, rho, std::nullopt)))).dump();
      },
      py::arg("M"), py::arg("rho"));

  m.def(
      "verify_json",
      [](int M, const std::string& rho, std::optional<double> X, int Lmax, std::uint64_t seed) {
        py::gil_scoped_release release;
        return envelope("verify", json(run_full_verification(params_of(M, rho, X), Lmax, seed))).dump();
      },
      py::arg("M"), py::arg("rho"), py::arg("X"), py::arg("Lmax"), py::arg("seed"));

  m.def(
      "bounded_json",
      [](int M, const std::string& rho, std::optional<double> X, int Lmax, double sigma, int samples,
         std::uint64_t seed, double t_range) {
        py::gil_scoped_release release;
        return envelope("bounded", json(run_boundedness_experiment(params_of(M, rho, X), sigma, Lmax, samples, seed,
                                                                   t_range)))
            .dump();
      },
      py::arg("M"), py::arg("rho"), py::arg("X"), py::arg("Lmax"), py::arg("sigma"), py::arg("samples"),
      py::arg("seed"), py::arg("t_range"));

  m.def(
      "diverge_json",
      [](int M, const std::string& rho, std::optional<double> X, int Lmax, double sigma) {
        py::gil_scoped_release release;
        return envelope("diverge", json(run_divergence_experiment(params_of(M, rho, X), sigma, Lmax))).dump();
      },
      py::arg("M"), py::arg("rho"), py::arg("X"), py::arg("Lmax"), py::arg("sigma"));

  m.def(
      "converge_json",
      [](int M, const std::string& rho, std::optional<double> X, int Lmax, std::optional<double> epsilon) {
        py::gil_scoped_release release;
        return envelope("converge", json(run_convergence_experiment(params_of(M, rho, X), Lmax, epsilon))).dump();
      },
      py::arg("M"), py::arg("rho"), py::arg("X"), py::arg("Lmax"), py::arg("epsilon"));

  m.def(
      "kronecker_json",
      [](int M, const std::string& rho, int L_K, double delta, double t_max, bool fixed, std::uint64_t seed) {
        DemonstrationOptions opt;
        opt.t_max = t_max;
        opt.seed = seed;
        opt.mode = fixed ? WitnessMode::fixed : WitnessMode::trajectory;
        for (int L = 1; L <= L_K; ++L) opt.deltas[L] = delta;
        const auto params = params_of(M, rho, std::nullopt);
        py::gil_scoped_release release;
        try {
          return envelope("kronecker", json(demonstrate_levels(params, L_K, opt))).dump();
        } catch (const SearchExhausted& e) {
          return envelope("kronecker", json(e.best())).dump();
        }
      },
      py::arg("M"), py::arg("rho"), py::arg("L_K"), py::arg("delta"), py::arg("t_max"), py::arg("fixed"),
      py::arg("seed"));
}
