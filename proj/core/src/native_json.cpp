#include "hfopt/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hfopt {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ElectronicSystem read_native_json(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  const int n_basis = doc.at("n_basis").get<int>();
  const int n_electrons = doc.at("n_electrons").get<int>();
  const Convention conv = convention_from_name(doc.at("convention").get<std::string>());
  const double core = doc.value("core_energy", 0.0);

  const auto& harr = doc.at("h");
  if (static_cast<int>(harr.size()) != n_basis * n_basis)
    throw std::runtime_error("native json: h has wrong length");
  Matrix h(n_basis, n_basis);
  for (int i = 0; i < n_basis; ++i)
    for (int j = 0; j < n_basis; ++j) h(i, j) = harr[i * n_basis + j].get<double>();

  EriTensor eri(n_basis);
  for (const auto& entry : doc.at("eri")) {
    if (entry.size() != 5) throw std::runtime_error("native json: eri entry must be [i,j,k,l,value]");
    const int i = entry[0].get<int>(), j = entry[1].get<int>();
    const int k = entry[2].get<int>(), l = entry[3].get<int>();
    eri.set(i - 1, j - 1, k - 1, l - 1, entry[4].get<double>());
  }

  ElectronicSystem sys = make_system(SymMatrix(h), std::move(eri), n_electrons, conv, core);
  if (doc.contains("kinetic")) {
    const auto& karr = doc.at("kinetic");
    if (static_cast<int>(karr.size()) != n_basis * n_basis)
      throw std::runtime_error("native json: kinetic has wrong length");
    Matrix kin(n_basis, n_basis);
    for (int i = 0; i < n_basis; ++i)
      for (int j = 0; j < n_basis; ++j) kin(i, j) = karr[i * n_basis + j].get<double>();
    sys.kinetic = SymMatrix(kin);
  }
  if (doc.contains("nuclear_charge")) sys.nuclear_charge = doc.at("nuclear_charge").get<int>();
  return sys;
}

ElectronicSystem read_native_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open native system file: " + path);
  return read_native_json(in);
}

std::string write_native_json(const ElectronicSystem& sys) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"n_basis\": " << sys.n_basis << ",\n";
  out << "  \"n_electrons\": " << sys.n_electrons << ",\n";
  out << "  \"convention\": \"" << convention_name(sys.convention) << "\",\n";
  out << "  \"core_energy\": " << format_double(sys.core_energy) << ",\n";
  out << "  \"h\": [";
  for (int i = 0; i < sys.n_basis; ++i)
    for (int j = 0; j < sys.n_basis; ++j) {
      if (i || j) out << ", ";
      out << format_double(sys.h(i, j));
    }
  out << "],\n";
  out << "  \"eri\": [";
  bool first = true;
  // canonical 1-based entries, nonzero only: i >= j, k >= l, (ij) >= (kl)
  for (int i = 0; i < sys.n_basis; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (EriTensor::pair_index(i, j) < EriTensor::pair_index(k, l)) continue;
          const double v = sys.eri(i, j, k, l);
          if (v == 0.0) continue;
          if (!first) out << ", ";
          first = false;
          out << "[" << (i + 1) << ", " << (j + 1) << ", " << (k + 1) << ", "
              << (l + 1) << ", " << format_double(v) << "]";
        }
  out << "]";
  if (sys.kinetic) {
    out << ",\n  \"kinetic\": [";
    for (int i = 0; i < sys.n_basis; ++i)
      for (int j = 0; j < sys.n_basis; ++j) {
        if (i || j) out << ", ";
        out << format_double((*sys.kinetic)(i, j));
      }
    out << "]";
  }
  if (sys.nuclear_charge) out << ",\n  \"nuclear_charge\": " << *sys.nuclear_charge;
  out << "\n}\n";
  return out.str();
}

ElectronicSystem load_system(const std::string& path, Convention convention) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system file: " + path);
  char c = 0;
  while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
  }
  in.seekg(0);
  if (c == '{') return read_native_json(in);
  return read_fcidump(in, convention);
}

}  // namespace hfopt
