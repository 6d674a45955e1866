#pragma once

// File formats: FCIDUMP ingestion, the native JSON system format, and the
// trace CSV / summary JSON emitted by runs. All numbers are serialized with
// 17 significant digits so that doubles round-trip exactly.

#include "hfopt/analysis.hpp"

#include <iosfwd>
#include <string>

namespace hfopt {

/// Parse error carrying a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// FCIDUMP reader. Header `&FCI NORB=.. NELEC=.. MS2=..` (comma, space or
/// newline separated assignments; ORBSYM and ISYM accepted and ignored)
/// terminated by `&END` or `/`. Body lines `value i j k l`, 1-based,
/// chemist convention: all indices nonzero -> (ij|kl); k=l=0 -> h_ij; all
/// zero -> core energy. MS2 != 0 and conflicting duplicates are rejected.
ElectronicSystem read_fcidump(std::istream& in, Convention convention);
ElectronicSystem read_fcidump_file(const std::string& path, Convention convention);

/// Native JSON system document: {n_basis, n_electrons, convention,
/// core_energy, h (row-major), eri ([i,j,k,l,value] canonical 1-based
/// entries), kinetic?, nuclear_charge?}.
ElectronicSystem read_native_json(std::istream& in);
ElectronicSystem read_native_json_file(const std::string& path);
std::string write_native_json(const ElectronicSystem& sys);

/// Sniffs the format (leading '{' means native JSON) and loads. The
/// convention argument applies to FCIDUMP only; native files carry their own.
ElectronicSystem load_system(const std::string& path, Convention convention);

/// Trace CSV: header `k,energy,grad_norm,dd1,dd2,gap,lyapunov,step`,
/// non-applicable fields empty.
std::string trace_to_csv(const IterationTrace& trace);

/// Flat summary document for one run.
std::string summary_to_json(const RunResult& result, const std::string& algorithm);

/// printf %.17g — round-trip exact for doubles; shared by every writer.
std::string format_double(double v);

}  // namespace hfopt
