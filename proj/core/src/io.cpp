// io.cpp — CSV and JSON serialization helpers.

#include "focklab/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>

namespace focklab {

std::string format_sig(double value, int sig) {
  if (sig < 1) sig = 1;
  if (sig > 17) sig = 17;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, value);
  return buf;
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, int sig) {
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const std::vector<double>& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_table_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_sig(row[i], sig);
    out << "\n";
  }
}

void write_density_json(std::ostream& out, const DensityMatrix& rho) {
  nlohmann::json j;
  j["dims"] = rho.dims;
  auto re = nlohmann::json::array();
  auto im = nlohmann::json::array();
  const long long d = rho.m.rows();
  for (long long r = 0; r < d; ++r)
    for (long long c = 0; c < d; ++c) {
      re.push_back(rho.m(r, c).real());
      im.push_back(rho.m(r, c).imag());
    }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  out << j.dump(2) << "\n";
}

DensityMatrix read_density_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("density json: ") + e.what());
  }
  try {
    const std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    long long total = 1;
    for (int d : dims) {
      if (d < 2) throw io_error("density json: dims entries must be >= 2");
      total *= d;
    }
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<long long>(re.size()) != total * total ||
        static_cast<long long>(im.size()) != total * total)
      throw io_error("density json: re/im length does not match dims");
    Matrix m(total, total);
    for (long long r = 0; r < total; ++r)
      for (long long c = 0; c < total; ++c)
        m(r, c) = Complex(re[r * total + c].get<double>(),
                          im[r * total + c].get<double>());
    return DensityMatrix{dims, std::move(m)};
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("density json: ") + e.what());
  }
}

}  // namespace focklab
