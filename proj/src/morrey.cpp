#include <schrolab/morrey.hpp>
#include <schrolab/orlicz.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace schrolab {

namespace {

using LocalFn = std::function<double(const Ball&, double wB)>;

MorreyNormResult evaluate(const ScalarField& f, const Weight& w, const MorreyParams& params,
                          const CriticalRadiusField& rho, const BallFamily& family, const LocalFn& local) {
  params.validate();
  rho.require_valid();
  if (f.grid != w.field.grid || f.grid != rho.grid) throw std::invalid_argument("grid mismatch");
  MorreyNormResult out;
  out.entries.reserve(family.size());
  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.count() == 0) continue;
    MorreyEntry e;
    e.ball = bi;
    e.local = local(B, measure(w.field, B));
    e.factor = std::pow(rho.growth_base(B), -params.theta);
    e.entry = e.local * e.factor;
    if (!out.argmax_ball || e.entry > out.value) {
      out.value = e.entry;
      out.argmax_ball = bi;
    }
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace

void MorreyParams::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("Morrey exponent p must be >= 1");
  if (!(kappa >= 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in [0, 1)");
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  if (flavor != MorreyFlavor::Strong && p != 1.0)
    throw std::invalid_argument("weak and LlogL Morrey norms require p = 1");
}

const char* flavor_name(MorreyFlavor f) {
  switch (f) {
    case MorreyFlavor::Strong:
      return "strong";
    case MorreyFlavor::Weak:
      return "weak";
    case MorreyFlavor::LlogL:
      return "llogl";
  }
  return "?";
}

MorreyNormResult morrey_norm(const ScalarField& f, const Weight& w, const MorreyParams& params,
                             const CriticalRadiusField& rho, const BallFamily& family) {
  if (params.flavor != MorreyFlavor::Strong) throw std::invalid_argument("morrey_norm needs the strong flavor");
  const double cv = f.grid.cell_volume();
  return evaluate(f, w, params, rho, family, [&](const Ball& B, double wB) {
    double s = 0.0;
    for (auto i : B.members()) s += std::pow(std::abs(f.values[i]), params.p) * w.field.values[i];
    return std::pow(std::pow(wB, -params.kappa) * s * cv, 1.0 / params.p);
  });
}

MorreyNormResult weak_morrey_norm(const ScalarField& f, const Weight& w, const MorreyParams& params,
                                  const CriticalRadiusField& rho, const BallFamily& family) {
  if (params.flavor != MorreyFlavor::Weak) throw std::invalid_argument("weak_morrey_norm needs the weak flavor");
  return evaluate(f, w, params, rho, family, [&](const Ball& B, double wB) {
    return std::pow(wB, -params.kappa) * weak_quasinorm_on_ball(f, w.field, B);
  });
}

MorreyNormResult lloglog_morrey_norm(const ScalarField& f, const Weight& w, const MorreyParams& params,
                                     const CriticalRadiusField& rho, const BallFamily& family) {
  if (params.flavor != MorreyFlavor::LlogL)
    throw std::invalid_argument("lloglog_morrey_norm needs the LlogL flavor");
  return evaluate(f, w, params, rho, family, [&](const Ball& B, double wB) {
    return std::pow(wB, 1.0 - params.kappa) * weighted_luxemburg_norm(f, B, YoungFunction::llogl(), w.field);
  });
}

MorreyNormResult evaluate_morrey(const ScalarField& f, const Weight& w, const MorreyParams& params,
                                 const CriticalRadiusField& rho, const BallFamily& family) {
  switch (params.flavor) {
    case MorreyFlavor::Strong:
      return morrey_norm(f, w, params, rho, family);
    case MorreyFlavor::Weak:
      return weak_morrey_norm(f, w, params, rho, family);
    case MorreyFlavor::LlogL:
      return lloglog_morrey_norm(f, w, params, rho, family);
  }
  throw std::invalid_argument("unknown flavor");
}

void write_morrey_csv(const MorreyNormResult& result, const BallFamily& family,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const int d = family.balls.empty() ? 0 : family.balls.front().grid().dim();
  out << "ball";
  for (int k = 0; k < d; ++k) out << ",x" << k + 1;
  out << ",radius,local,factor,entry\n";
  out.precision(17);
  for (const auto& e : result.entries) {
    const Ball& B = family.balls[e.ball];
    out << e.ball;
    for (double c : B.center()) out << ',' << c;
    out << ',' << B.radius() << ',' << e.local << ',' << e.factor << ',' << e.entry << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace schrolab
