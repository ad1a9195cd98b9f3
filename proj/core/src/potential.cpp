#include "merw/potential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace merw {

Potential zero_potential() {
  return {[](std::span<const double>) { return 0.0; }, "zero"};
}

Potential harmonic_potential(double omega) {
  std::ostringstream os;
  os << "harmonic:" << omega;
  return {[omega](std::span<const double> x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return 0.5 * omega * omega * r2;
          },
          os.str()};
}

Potential coulomb_potential(double alpha, double r_cut) {
  if (!(r_cut > 0.0)) throw std::invalid_argument("coulomb_potential: r_cut must be > 0");
  std::ostringstream os;
  os << "coulomb:" << alpha << ":" << r_cut;
  return {[alpha, r_cut](std::span<const double> x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return -alpha / std::max(std::sqrt(r2), r_cut);
          },
          os.str()};
}

Potential parse_potential(const std::string& name, double default_r_cut) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream is(name);
  while (std::getline(is, token, ':')) parts.push_back(token);
  if (parts.empty()) throw std::invalid_argument("potential: empty preset name");

  const auto num = [&](std::size_t i) {
    std::size_t pos = 0;
    double v = std::stod(parts[i], &pos);
    if (pos != parts[i].size()) throw std::invalid_argument("potential: bad number in '" + name + "'");
    return v;
  };

  if (parts[0] == "zero") {
    if (parts.size() != 1) throw std::invalid_argument("potential: 'zero' takes no parameters");
    return zero_potential();
  }
  if (parts[0] == "harmonic") {
    if (parts.size() != 2) throw std::invalid_argument("potential: expected 'harmonic:<omega>'");
    return harmonic_potential(num(1));
  }
  if (parts[0] == "coulomb") {
    if (parts.size() == 2) return coulomb_potential(num(1), default_r_cut);
    if (parts.size() == 3) return coulomb_potential(num(1), num(2));
    throw std::invalid_argument("potential: expected 'coulomb:<alpha>[:<r_cut>]'");
  }
  throw std::invalid_argument("potential: unknown preset '" + parts[0] + "'");
}

}  // namespace merw
