#include "pacqe/params.hpp"

namespace pacqe {

namespace {

void walk(const Formula& f, ParamsReport& report) {
  switch (f.kind()) {
    case Kind::Lt:
      report.lin.insert(f.term());
      report.hom.insert(f.term().homogeneous());
      break;
    case Kind::Mod:
      report.mods.insert(f.modulus());
      break;
    default:
      break;
  }
  for (const Formula& c : f.children()) walk(c, report);
}

}  // namespace

ParamsReport params_report(const Formula& f) {
  ParamsReport report;
  report.mods.insert(1);  // 1 ∈ Mod(φ) always
  walk(f, report);
  for (const LinearTerm& t : report.lin) {
    Int n = t.norm();
    if (n > report.norm_lin) report.norm_lin = n;
  }
  for (const LinearTerm& t : report.hom) {
    Int n = t.norm();
    if (n > report.norm_hom) report.norm_hom = n;
  }
  report.norm_mods = *report.mods.rbegin();
  return report;
}

}  // namespace pacqe
