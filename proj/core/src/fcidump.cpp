#include "hfopt/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hfopt {

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

bool parse_long(const std::string& tok, long& out) {
  try {
    std::size_t pos = 0;
    out = std::stol(tok, &pos);
    return pos == tok.size();
  } catch (...) {
    return false;
  }
}

bool parse_double(const std::string& tok, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(tok, &pos);
    return pos == tok.size();
  } catch (...) {
    return false;
  }
}

struct Assigner {
  std::vector<bool> seen;
  // conflicting duplicate entries are a parse error; exact duplicates pass
  void check(bool& was_set, double old_v, double new_v, long line, const char* what) {
    if (was_set && std::abs(old_v - new_v) > 1e-10) {
      std::ostringstream msg;
      msg << "duplicate " << what << " entry with conflicting values " << old_v
          << " vs " << new_v;
      throw ParseError(msg.str(), line);
    }
    was_set = true;
  }
};

}  // namespace

ElectronicSystem read_fcidump(std::istream& in, Convention convention) {
  long line_no = 0;
  std::string line;

  // header: collect tokens until &END or /
  long norb = -1, nelec = -1, ms2 = 0;
  bool saw_ms2 = false;
  bool header_done = false;
  bool saw_fci = false;
  std::string pending_key;  // for ORBSYM=1,1,... value lists we skip values

  while (!header_done && std::getline(in, line)) {
    ++line_no;
    // normalize separators: commas become spaces, '=' kept attached
    std::string norm;
    for (char c : line) norm += (c == ',') ? ' ' : c;
    std::istringstream iss(norm);
    std::string tok;
    while (iss >> tok) {
      std::string utok = upper(tok);
      if (utok == "&FCI") {
        saw_fci = true;
        continue;
      }
      if (utok == "&END" || utok == "/") {
        header_done = true;
        break;
      }
      const std::size_t eq = tok.find('=');
      std::string key = eq == std::string::npos ? pending_key : upper(tok.substr(0, eq));
      std::string val = eq == std::string::npos ? tok : tok.substr(eq + 1);
      if (key.empty())
        throw ParseError("unexpected header token '" + tok + "'", line_no);
      if (key == "ORBSYM" || key == "ISYM") {
        pending_key = key;  // ignore the value list
        continue;
      }
      pending_key.clear();
      long v;
      if (val.empty()) {  // "NORB =" split across tokens is not supported
        throw ParseError("empty value for header key " + key, line_no);
      }
      if (!parse_long(val, v))
        throw ParseError("bad integer '" + val + "' for header key " + key, line_no);
      if (key == "NORB") norb = v;
      else if (key == "NELEC") nelec = v;
      else if (key == "MS2") { ms2 = v; saw_ms2 = true; }
      else throw ParseError("unknown header key " + key, line_no);
    }
  }
  if (!saw_fci) throw ParseError("missing &FCI header", 1);
  if (!header_done) throw ParseError("header not terminated by &END or /", line_no);
  if (norb < 1) throw ParseError("missing or invalid NORB", line_no);
  if (nelec < 1) throw ParseError("missing or invalid NELEC", line_no);
  if (saw_ms2 && ms2 != 0)
    throw ParseError("MS2 != 0 unsupported (closed-shell/spinless scope)", line_no);

  Matrix h = Matrix::Zero(norb, norb);
  std::vector<bool> h_set(static_cast<std::size_t>(norb) * norb, false);
  EriTensor eri(static_cast<int>(norb));
  std::vector<bool> eri_set(eri.packed().size(), false);
  double core = 0.0;
  bool core_set = false;
  Assigner dup;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream iss(line);
    std::string vtok;
    if (!(iss >> vtok)) continue;  // blank line
    double value;
    if (!parse_double(vtok, value))
      throw ParseError("bad value '" + vtok + "'", line_no);
    long idx[4];
    for (int t = 0; t < 4; ++t) {
      std::string itok;
      if (!(iss >> itok)) throw ParseError("expected 4 indices after the value", line_no);
      if (!parse_long(itok, idx[t]) || idx[t] < 0)
        throw ParseError("bad index '" + itok + "'", line_no);
      if (idx[t] > norb)
        throw ParseError("index " + std::to_string(idx[t]) + " exceeds NORB", line_no);
    }
    std::string extra;
    if (iss >> extra) throw ParseError("trailing token '" + extra + "'", line_no);

    const long i = idx[0], j = idx[1], k = idx[2], l = idx[3];
    if (i > 0 && j > 0 && k > 0 && l > 0) {
      const std::size_t p = eri.index(static_cast<int>(i - 1), static_cast<int>(j - 1),
                                      static_cast<int>(k - 1), static_cast<int>(l - 1));
      bool was = eri_set[p];
      dup.check(was, eri.packed()[p], value, line_no, "two-electron");
      eri_set[p] = true;
      eri.set(static_cast<int>(i - 1), static_cast<int>(j - 1),
              static_cast<int>(k - 1), static_cast<int>(l - 1), value);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const std::size_t p = static_cast<std::size_t>(std::max(i, j) - 1) * norb +
                            (std::min(i, j) - 1);
      bool was = h_set[p];
      dup.check(was, h(i - 1, j - 1), value, line_no, "one-electron");
      h_set[p] = true;
      h(i - 1, j - 1) = h(j - 1, i - 1) = value;
    } else if (i == 0 && j == 0 && k == 0 && l == 0) {
      bool was = core_set;
      dup.check(was, core, value, line_no, "core-energy");
      core_set = true;
      core = value;
    } else {
      throw ParseError("unrecognized index pattern (" + std::to_string(i) + " " +
                           std::to_string(j) + " " + std::to_string(k) + " " +
                           std::to_string(l) + ")",
                       line_no);
    }
  }

  return make_system(SymMatrix(h), std::move(eri), static_cast<int>(nelec),
                     convention, core);
}

ElectronicSystem read_fcidump_file(const std::string& path, Convention convention) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FCIDUMP file: " + path);
  return read_fcidump(in, convention);
}

}  // namespace hfopt
