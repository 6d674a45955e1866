#include "hfopt/io.hpp"

#include <cmath>
#include <sstream>

namespace hfopt {

namespace {

void put_field(std::ostringstream& out, double v) {
  if (std::isfinite(v)) out << format_double(v);
  // NaN means non-applicable: emit an empty field
}

}  // namespace

std::string trace_to_csv(const IterationTrace& trace) {
  std::ostringstream out;
  out << "k,energy,grad_norm,dd1,dd2,gap,lyapunov,step\n";
  for (const IterationRecord& r : trace) {
    out << r.k << ',';
    put_field(out, r.energy);
    out << ',';
    put_field(out, r.grad_norm);
    out << ',';
    put_field(out, r.dd1);
    out << ',';
    put_field(out, r.dd2);
    out << ',';
    put_field(out, r.gap);
    out << ',';
    put_field(out, r.lyapunov);
    out << ',';
    put_field(out, r.step);
    out << '\n';
  }
  return out.str();
}

std::string summary_to_json(const RunResult& result, const std::string& algorithm) {
  const IterationRecord& last = result.trace.back();
  std::ostringstream out;
  out << "{\n";
  out << "  \"algorithm\": \"" << algorithm << "\",\n";
  out << "  \"status\": \"" << status_name(result.status) << "\",\n";
  out << "  \"iterations\": " << last.k << ",\n";
  out << "  \"final_energy\": " << format_double(last.energy) << ",\n";
  out << "  \"final_grad_norm\": " << format_double(last.grad_norm) << ",\n";
  out << "  \"aufbau_residual\": ";
  if (std::isfinite(result.aufbau_residual))
    out << format_double(result.aufbau_residual);
  else
    out << "null";
  out << "\n}\n";
  return out.str();
}

}  // namespace hfopt
