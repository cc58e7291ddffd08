#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "upsbp/operators.hpp"

namespace upsbp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// Accepts plain decimals and exact rationals "p/q".
double parse_value(const std::string& tok, int lineno) {
  const auto slash = tok.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(tok.substr(0, slash));
      const double den = std::stod(tok.substr(slash + 1));
      if (den == 0.0) throw TableParseError("zero denominator");
      return num / den;
    }
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw TableParseError("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw TableParseError("operator table: bad value '" + tok + "' on line " +
                          std::to_string(lineno));
  }
}

void format_value(char* buf, std::size_t size, double v) { std::snprintf(buf, size, "%.17g", v); }

}  // namespace

OperatorPair load_operator_table(std::istream& in) {
  std::string kind;
  int order = -1, nodes = -1;
  double xmin = 0.0, xmax = 0.0;
  bool have_xmin = false, have_xmax = false;

  std::vector<double> mass;
  std::vector<Triplet> dplus, dminus;
  enum class Section { header, mass, dplus, dminus } section = Section::header;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line == "mass:") {
      section = Section::mass;
      continue;
    }
    if (line == "dplus:") {
      section = Section::dplus;
      continue;
    }
    if (line == "dminus:") {
      section = Section::dminus;
      continue;
    }

    if (section == Section::header) {
      const auto colon = line.find(':');
      if (colon == std::string::npos)
        throw TableParseError("operator table: expected 'key: value' on line " +
                              std::to_string(lineno));
      const std::string key = trim(line.substr(0, colon));
      const std::string val = trim(line.substr(colon + 1));
      if (key == "kind") {
        if (val != "bounded" && val != "periodic")
          throw TableParseError("operator table: kind must be bounded or periodic (line " +
                                std::to_string(lineno) + ")");
        kind = val;
      } else if (key == "order") {
        order = static_cast<int>(parse_value(val, lineno));
      } else if (key == "nodes") {
        nodes = static_cast<int>(parse_value(val, lineno));
      } else if (key == "xmin") {
        xmin = parse_value(val, lineno);
        have_xmin = true;
      } else if (key == "xmax") {
        xmax = parse_value(val, lineno);
        have_xmax = true;
      } else {
        throw TableParseError("operator table: unknown header key '" + key + "' on line " +
                              std::to_string(lineno));
      }
      continue;
    }

    if (section == Section::mass) {
      mass.push_back(parse_value(line, lineno));
      continue;
    }

    std::istringstream row(line);
    std::string si, sj, sv;
    if (!(row >> si >> sj >> sv))
      throw TableParseError("operator table: expected 'i j value' on line " +
                            std::to_string(lineno));
    std::string extra;
    if (row >> extra)
      throw TableParseError("operator table: trailing data on line " + std::to_string(lineno));
    Triplet t{};
    t.row = static_cast<int>(parse_value(si, lineno));
    t.col = static_cast<int>(parse_value(sj, lineno));
    t.value = parse_value(sv, lineno);
    if (nodes <= 0 || t.row < 0 || t.row >= nodes || t.col < 0 || t.col >= nodes)
      throw TableParseError("operator table: index out of range on line " +
                            std::to_string(lineno));
    (section == Section::dplus ? dplus : dminus).push_back(t);
  }

  if (kind.empty()) throw TableParseError("operator table: missing 'kind'");
  if (order < 1) throw TableParseError("operator table: missing or invalid 'order'");
  if (nodes < 2) throw TableParseError("operator table: missing or invalid 'nodes'");
  if (!have_xmin || !have_xmax || !(xmax > xmin))
    throw TableParseError("operator table: invalid domain");
  if (static_cast<int>(mass.size()) != nodes)
    throw TableParseError("operator table: expected " + std::to_string(nodes) +
                          " mass entries, got " + std::to_string(mass.size()));

  OperatorPair op;
  op.periodic = (kind == "periodic");
  op.grid = op.periodic ? Grid1D::uniform_periodic(nodes, xmin, xmax)
                        : Grid1D::uniform_bounded(nodes, xmin, xmax);
  op.mass = std::move(mass);
  op.dplus = StencilMatrix::from_triplets(nodes, std::move(dplus));
  op.dminus = StencilMatrix::from_triplets(nodes, std::move(dminus));
  op.interior_order = order;
  op.interior_row = infer_interior_rows(op);
  expect_valid(op);
  return op;
}

OperatorPair load_operator_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableParseError("operator table: cannot open '" + path + "'");
  return load_operator_table(in);
}

void save_operator_table(const OperatorPair& op, std::ostream& out) {
  const int n = op.size();
  // only uniform grids fit the file format
  const double dx = op.grid.min_spacing();
  const int intervals = op.periodic ? n : n - 1;
  if (std::abs(dx * intervals - op.grid.length()) > 1e-12 * op.grid.length())
    throw InvalidArgument("save_operator_table: only uniform grids are supported");

  char buf[40];
  out << "kind: " << (op.periodic ? "periodic" : "bounded") << "\n";
  out << "order: " << op.interior_order << "\n";
  out << "nodes: " << n << "\n";
  format_value(buf, sizeof buf, op.grid.xmin);
  out << "xmin: " << buf << "\n";
  format_value(buf, sizeof buf, op.grid.xmax);
  out << "xmax: " << buf << "\n";
  out << "mass:\n";
  for (double m : op.mass) {
    format_value(buf, sizeof buf, m);
    out << buf << "\n";
  }
  out << "dplus:\n";
  op.dplus.for_each([&](int r, int c, double v) {
    format_value(buf, sizeof buf, v);
    out << r << " " << c << " " << buf << "\n";
  });
  out << "dminus:\n";
  op.dminus.for_each([&](int r, int c, double v) {
    format_value(buf, sizeof buf, v);
    out << r << " " << c << " " << buf << "\n";
  });
}

void save_operator_table_file(const OperatorPair& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("save_operator_table: cannot open '" + path + "'");
  save_operator_table(op, out);
}

void save_derived_stencil_table(int order, int n_nodes, double xmin, double xmax,
                                std::ostream& out) {
  const auto st = derive_periodic_stencil(order);
  if (n_nodes <= order + 2)
    throw InvalidArgument("save_derived_stencil_table: need more than order+2 nodes");
  const int m = static_cast<int>(st.offsets.size());

  char buf[40];
  out << "# derived periodic upwind stencil, interior order " << order << "\n";
  out << "kind: periodic\n";
  out << "order: " << order << "\n";
  out << "nodes: " << n_nodes << "\n";
  format_value(buf, sizeof buf, xmin);
  out << "xmin: " << buf << "\n";
  format_value(buf, sizeof buf, xmax);
  out << "xmax: " << buf << "\n";
  // entries are emitted as shortest round-trip decimals of weight/dx, the
  // exact values the in-memory constructor produces
  const double dx = (xmax - xmin) / n_nodes;
  out << "mass:\n";
  for (int i = 0; i < n_nodes; ++i) {
    format_value(buf, sizeof buf, dx);
    out << buf << "\n";
  }
  auto emit = [&](const std::vector<int>& offs, const std::vector<Rational>& w) {
    for (int i = 0; i < n_nodes; ++i) {
      for (int k = 0; k < m; ++k) {
        const int c = ((i + offs[k]) % n_nodes + n_nodes) % n_nodes;
        format_value(buf, sizeof buf, w[k].value() / dx);
        out << i << " " << c << " " << buf << "\n";
      }
    }
  };
  out << "dplus:\n";
  emit(st.offsets, st.weights);
  std::vector<int> offm(m);
  std::vector<Rational> wm(m);
  for (int k = 0; k < m; ++k) {
    offm[k] = -st.offsets[m - 1 - k];
    wm[k] = -st.weights[m - 1 - k];
  }
  out << "dminus:\n";
  emit(offm, wm);
}

}  // namespace upsbp
