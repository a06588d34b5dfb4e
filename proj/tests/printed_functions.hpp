#pragma once

// Basis functions printed for the three-quad corner mesh at (k, r) = (4, 1),
// transcribed term by term. Each function lists one expression per face in the
// order of the bundled fan3 mesh; "Nij" is the tensor B-spline N_i(u) N_j(v).

#include <array>
#include <regex>
#include <string>
#include <vector>

#include "g1s/g1basis.hpp"

namespace printed {

struct Printed {
  std::string name;
  std::array<std::string, 3> faces;
};

inline const std::vector<Printed>& printed_functions() {
  static const std::vector<Printed> fns = {
      {"value",
       {"N00+1/3N02+N03+N04+2N13+2N14+1/3N20+N30+N40",
        "N00+1/3N20+N30+N40+3N01+31/3N02+17N03+17N04+14N12+34N13+34N14",
        "N00+3N10+31/3N20+17N30+17N40+1/3N02+N03+N04+2N13+2N14"}},
      {"derivative-1",
       {"N01+10/3N02+16/3N03+16/3N04+14/3N12+32/3N13+32/3N14", "N10+10/3N20+16/3N30+16/3N40",
        "-N01-10/3N02-16/3N03-16/3N04-16/3N12-32/3N13-32/3N14-N10-10/3N20-16/3N30-16/3N40"}},
      {"derivative-2",
       {"N10+10/3N20+16/3N30+16/3N40", "-N01-10/3N02-16/3N03-16/3N04-14/3N12-32/3N13-32/3N14",
        "-N10-10/3N20-16/3N30-16/3N40+N01+10/3N02+16/3N03+16/3N04+14/3N12+32/3N13+32/3N14"}},
      {"cross-1", {"-4/3N02-8/3N03-8/3N04+N11-4/3N12-16/3N13-16/3N14", "-4/3N20-8/3N30-8/3N40", ""}},
      {"cross-2",
       {"-4/3N20-8/3N30-8/3N40", "-4/3N02-8/3N03-8/3N04-4/3N12-16/3N13-16/3N14",
        "-4/3N20-8/3N30-8/3N40+N11-4/3N02-8/3N03-8/3N04-4/3N12-16/3N13-16/3N14"}},
      {"cross-3", {"-4/3N20-8/3N30-8/3N40", "", "-4/3N02-8/3N03-8/3N04-4/3N12-16/3N13-16/3N14"}},
      {"delta-1", {"N07", "N70+2N71", ""}},
      {"delta-2", {"N06", "N60+2N61", ""}},
      {"delta-3", {"N17", "-N71", ""}},
      {"delta-4", {"N16", "-N61", ""}},
      {"edge-1", {"-N12", "N21", ""}},
      {"edge-2", {"-N13", "N31", ""}},
      {"edge-3", {"-N14", "N41", ""}},
      {"edge-4", {"-N15", "N51", ""}},
      {"edge-5", {"N05+2N15", "N50", ""}},
  };
  return fns;
}

inline g1s::SplineFunction to_function(const Printed& p, const g1s::SplineLayout& lay) {
  static const std::regex term(R"(([+-]?)(\d+)?(?:/(\d+))?N(\d)(\d))");
  std::map<int, g1s::Rational> acc;
  for (int f = 0; f < 3; ++f) {
    const std::string& s = p.faces[f];
    for (std::sregex_iterator it(s.begin(), s.end(), term), end; it != end; ++it) {
      const auto& m = *it;
      g1s::Rational c(m[2].matched ? std::stoi(m[2]) : 1, m[3].matched ? std::stoi(m[3]) : 1);
      c.canonicalize();
      if (m[1] == "-") c = -c;
      acc[lay.index(f, std::stoi(m[4]), std::stoi(m[5]))] += c;
    }
  }
  g1s::SplineFunction out{lay, {}};
  for (const auto& [col, v] : acc) {
    if (sgn(v) != 0) out.coeffs.emplace_back(col, v);
  }
  return out;
}

}  // namespace printed
