#include "stein_solution.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels.hpp"
#include "specfun.hpp"

namespace stein_bounds {

SteinSolution::SteinSolution(TestFunctionPtr h, int theta_order, int z_order)
    : h_(std::move(h)), theta_order_(theta_order), z_order_(z_order) {
  if (!h_) throw std::invalid_argument("SteinSolution: null test function");
  auto phi = h_->phi_h();
  if (!phi) throw std::invalid_argument("SteinSolution: test function lacks phi_h");
  phi_ = *phi;
  theta_ = quadrature::gauss_legendre(theta_order_, 0.0, 0.5 * M_PI);
  z_ = quadrature::gauss_hermite_prob(z_order_);
}

double SteinSolution::derivative(int k, double w, SteinRep rep) const {
  if (k < 1) throw std::domain_error("SteinSolution::derivative: k must be >= 1");
  if (std::fabs(w) > 20.0)
    throw std::domain_error("SteinSolution::derivative: |w| outside accuracy envelope (20)");
  const int need = rep == SteinRep::A ? k - 1 : k;
  if (h_->max_order() < need)
    throw std::invalid_argument(
        "SteinSolution::derivative: test function lacks required derivative order");

  const int nz = static_cast<int>(z_.nodes.size());
  std::vector<double> args(nz), vals(nz);
  double outer = 0.0;
  for (std::size_t t = 0; t < theta_.nodes.size(); ++t) {
    const double st = std::sin(theta_.nodes[t]);
    const double ct = std::cos(theta_.nodes[t]);
    kernels::affine(ct, w * st, z_.nodes, args);  // w sin(th) + z cos(th)
    double inner;
    if (rep == SteinRep::A) {
      // E[Z h^(k-1)(.)]: fold the z factor into the evaluation buffer
      for (int i = 0; i < nz; ++i) vals[i] = z_.nodes[i] * h_->evaluate(k - 1, args[i]);
      inner = kernels::dot(z_.weights, vals);
    } else {
      for (int i = 0; i < nz; ++i) vals[i] = h_->evaluate(k, args[i]);
      inner = ct * kernels::dot(z_.weights, vals);
    }
    double sk = 1.0;  // sin^{k-1}
    for (int j = 0; j < k - 1; ++j) sk *= st;
    outer += theta_.weights[t] * sk * inner;
  }
  return -outer;
}

double SteinSolution::residual(double w) const {
  const SteinRep rep = h_->max_order() >= 2 ? SteinRep::B : SteinRep::A;
  return derivative(2, w, rep) - w * derivative(1, w, rep) - (h_->evaluate(0, w) - phi_);
}

namespace {

// sup_norm(j) if the function carries derivatives that far, else nothing
std::optional<double> norm_if_available(const TestFunction& h, int j) {
  if (j < 0 || j > h.max_order()) return std::nullopt;
  return h.sup_norm(j);
}

}  // namespace

DerivativeBoundCatalog derivative_bounds(const TestFunction& h, int k) {
  if (k < 1) throw std::domain_error("derivative_bounds: k must be >= 1");
  DerivativeBoundCatalog cat;
  cat.k = k;
  if (k <= 2 && h.phi_h()) {
    const double centered = h.centered_sup_norm();
    cat.entries.push_back({"classic", (k == 1 ? std::sqrt(0.5 * M_PI) : 2.0) * centered});
  }
  if (auto n = norm_if_available(h, k))
    cat.entries.push_back({"h^(k)/k", *n / k});
  if (k >= 2) {
    if (auto n = norm_if_available(h, k - 1))
      cat.entries.push_back(
          {"gamma*h^(k-1)", specfun::gamma_ratio_constant(k).value * *n});
  }
  if (k >= 3) {
    if (auto n = norm_if_available(h, k - 2)) cat.entries.push_back({"3h^(k-2)", 3.0 * *n});
  }
  if (cat.entries.empty())
    throw std::invalid_argument("derivative_bounds: no applicable bound entry for this h");
  cat.min_bound = cat.entries.front().value;
  cat.branch = cat.entries.front().branch;
  for (const auto& e : cat.entries) {
    if (e.value < cat.min_bound) {
      cat.min_bound = e.value;
      cat.branch = e.branch;
    }
  }
  return cat;
}

WfBound wf_bound(const TestFunction& h, int k) {
  if (k < 1) throw std::domain_error("wf_bound: k must be >= 1");
  if (k == 1) return {h.centered_sup_norm(), "h-Eh"};
  auto n = norm_if_available(h, k - 1);
  if (!n) throw std::invalid_argument("wf_bound: ||h^(k-1)|| unavailable");
  return {*n, "h^(k-1)"};
}

namespace {

struct SupScan {
  double sup_f = 0.0, sup_wf = 0.0;
  double arg_f = 0.0, arg_wf = 0.0;
};

SupScan scan(const SteinSolution& sol, int k, SteinRep rep, double lo, double hi,
             double step) {
  SupScan s;
  for (double w = lo; w <= hi + 0.5 * step; w += step) {
    const double v = std::fabs(sol.derivative(k, w, rep));
    if (v > s.sup_f) {
      s.sup_f = v;
      s.arg_f = w;
    }
    const double wv = std::fabs(w) * v;
    if (wv > s.sup_wf) {
      s.sup_wf = wv;
      s.arg_wf = w;
    }
  }
  return s;
}

}  // namespace

VerifyReport verify_bounds(TestFunctionPtr h, int k_max, VerifyGrid grid, int theta_order,
                           int z_order) {
  if (k_max < 1) throw std::domain_error("verify_bounds: k_max must be >= 1");
  if (!(grid.lo < grid.hi) || !(grid.step > 0.0))
    throw std::domain_error("verify_bounds: malformed grid");
  SteinSolution sol(h, theta_order, z_order);
  VerifyReport report;
  report.all_pass = true;
  for (int k = 1; k <= k_max; ++k) {
    const SteinRep rep = h->max_order() >= k ? SteinRep::B : SteinRep::A;
    SupScan coarse = scan(sol, k, rep, grid.lo, grid.hi, grid.step);
    // one refinement pass around each coarse argmax
    for (double centre : {coarse.arg_f, coarse.arg_wf}) {
      const double lo = std::max(grid.lo, centre - grid.step);
      const double hi = std::min(grid.hi, centre + grid.step);
      SupScan fine = scan(sol, k, rep, lo, hi, grid.step / 50.0);
      coarse.sup_f = std::max(coarse.sup_f, fine.sup_f);
      coarse.sup_wf = std::max(coarse.sup_wf, fine.sup_wf);
    }

    const DerivativeBoundCatalog cat = derivative_bounds(*h, k);
    const WfBound wfb = wf_bound(*h, k);
    VerifyRecord rec;
    rec.k = k;
    rec.sup_f = coarse.sup_f;
    rec.sup_wf = coarse.sup_wf;
    rec.bound = cat.min_bound;
    rec.branch = cat.branch;
    rec.bound_wf = wfb.value;
    rec.branch_wf = wfb.branch;
    const auto pass = [](double sup, double bound) {
      return sup <= bound * (1.0 + 1e-6) + 1e-9;
    };
    rec.pass_f = pass(rec.sup_f, rec.bound);
    rec.pass_wf = pass(rec.sup_wf, rec.bound_wf);
    rec.pass = rec.pass_f && rec.pass_wf;
    report.all_pass = report.all_pass && rec.pass;
    report.records.push_back(std::move(rec));
  }
  return report;
}

nlohmann::ordered_json to_json(const VerifyReport& report) {
  nlohmann::ordered_json j;
  j["all_pass"] = report.all_pass;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json rec;
    rec["k"] = r.k;
    rec["sup_f"] = r.sup_f;
    rec["sup_wf"] = r.sup_wf;
    rec["bound"] = r.bound;
    rec["branch"] = r.branch;
    rec["pass"] = r.pass;
    rec["bound_wf"] = r.bound_wf;
    rec["branch_wf"] = r.branch_wf;
    rec["pass_f"] = r.pass_f;
    rec["pass_wf"] = r.pass_wf;
    j["records"].push_back(std::move(rec));
  }
  return j;
}

VerifyReport verify_report_from_json(const nlohmann::ordered_json& j) {
  VerifyReport report;
  report.all_pass = j.at("all_pass").get<bool>();
  for (const auto& rec : j.at("records")) {
    VerifyRecord r;
    r.k = rec.at("k").get<int>();
    r.sup_f = rec.at("sup_f").get<double>();
    r.sup_wf = rec.at("sup_wf").get<double>();
    r.bound = rec.at("bound").get<double>();
    r.branch = rec.at("branch").get<std::string>();
    r.pass = rec.at("pass").get<bool>();
    r.bound_wf = rec.at("bound_wf").get<double>();
    r.branch_wf = rec.at("branch_wf").get<std::string>();
    r.pass_f = rec.at("pass_f").get<bool>();
    r.pass_wf = rec.at("pass_wf").get<bool>();
    report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace stein_bounds
