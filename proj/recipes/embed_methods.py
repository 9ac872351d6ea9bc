#!/usr/bin/env python3
"""Prints include/mdrk/generated_methods.hpp from the tableau files in a directory."""
import json
import pathlib
import sys

HEADER = """#pragma once

// Tableaus produced by the optimizer (see recipes/generate_methods.sh).
// Coefficients are stored row-major with 17 significant digits.

#include <string>
#include <vector>

namespace mdrk::generated {

struct GeneratedMethod {
  std::string name;
  std::string variant;
  double k;
  int order;
  double cts;
  std::vector<double> A;
  std::vector<double> Ahat;
  std::vector<double> b;
  std::vector<double> bhat;
};

inline const std::vector<GeneratedMethod>& methods() {
  static const std::vector<GeneratedMethod> list{
"""

FOOTER = """  };
  return list;
}

}  // namespace mdrk::generated
"""


def num(v):
    return "%.17g" % float(v)


def numbers(values, indent):
    items = [num(v) for v in values]
    lines, line = [], indent + "{"
    for it in items:
        piece = it + ", "
        if len(line) + len(piece) > 98:
            lines.append(line.rstrip())
            line = indent + " "
        line += piece
    lines.append(line.rstrip().rstrip(","))
    return "\n".join(lines).lstrip() + "}"


def main():
    files = sorted(pathlib.Path(sys.argv[1]).glob("*.json"))
    out = [HEADER]
    for f in files:
        m = json.loads(f.read_text())
        k = m["K_design"]
        k = "1.0 / 0.0" if k == "inf" else num(k)
        flat = lambda rows: [x for r in rows for x in r]
        ind = " " * 10
        out.append(
            "      {%s, %s, %s, %d, %s,\n       %s,\n       %s,\n       %s,\n       %s},\n"
            % (json.dumps(m["name"]), json.dumps(m["variant"]), k, m["p_design"], num(m["C_TS"]),
               numbers(flat(m["A"]), ind), numbers(flat(m["Ahat"]), ind),
               numbers(m["b"], ind), numbers(m["bhat"], ind)))
    out.append(FOOTER)
    sys.stdout.write("".join(out))


if __name__ == "__main__":
    main()
