#include "mandelq/density_io.hpp"

#include <Eigen/Eigenvalues>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "mandelq/errors.hpp"

namespace mandelq {

namespace {

bool is_decoration(char ch) {
  return ch == '=' || ch == ',' || ch == '[' || ch == ']' || ch == '(' || ch == ')';
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  bool in_comment = false;
  const auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (char ch : text) {
    if (in_comment) {
      if (ch == '\n') in_comment = false;
      continue;
    }
    if (ch == '#') {
      in_comment = true;
      flush();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch)) || is_decoration(ch)) {
      flush();
      continue;
    }
    current += ch;
  }
  flush();
  return tokens;
}

int parse_int(const std::string& token, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    std::ostringstream os;
    os << "expected an integer for " << what << ", got '" << token << "'";
    throw ParseError(os.str());
  }
  return value;
}

double parse_real(const std::string& token, std::size_t pair_index, const char* part) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    std::ostringstream os;
    os << "expected a real number for the " << part << " part of entry " << pair_index
       << ", got '" << token << "'";
    throw ParseError(os.str());
  }
  return value;
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // fold -0
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

struct EntryName {
  int n1, n2, m1, m2;
};

EntryName decode(const Cutoff& cutoff, int row, int col) {
  const int d = cutoff.mode_dim();
  return {row / d, row % d, col / d, col % d};
}

}  // namespace

void validate_density(const CMatrix& rho, const Cutoff& cutoff) {
  if (cutoff.n_max < 1) {
    std::ostringstream os;
    os << "cutoff n_max must be at least 1, got " << cutoff.n_max;
    throw ValidationError(os.str());
  }
  if (rho.rows() != cutoff.dim() || rho.cols() != cutoff.dim()) {
    std::ostringstream os;
    os << "density is " << rho.rows() << "x" << rho.cols() << " but n_max = "
       << cutoff.n_max << " requires " << cutoff.dim() << "x" << cutoff.dim();
    throw DimensionMismatch(os.str());
  }

  for (int i = 0; i < rho.rows(); ++i) {
    for (int j = 0; j < rho.cols(); ++j) {
      if (!std::isfinite(rho(i, j).real()) || !std::isfinite(rho(i, j).imag())) {
        const EntryName e = decode(cutoff, i, j);
        std::ostringstream os;
        os << "density entry <" << e.n1 << "," << e.n2 << "|rho|" << e.m1 << "," << e.m2
           << "> is not finite";
        throw ValidationError(os.str());
      }
    }
  }

  double worst_dev = 0.0;
  int worst_i = 0, worst_j = 0;
  for (int i = 0; i < rho.rows(); ++i) {
    for (int j = i; j < rho.cols(); ++j) {
      const double dev = std::abs(rho(i, j) - std::conj(rho(j, i)));
      if (dev > worst_dev) {
        worst_dev = dev;
        worst_i = i;
        worst_j = j;
      }
    }
  }
  if (worst_dev > 1e-10) {
    const EntryName e = decode(cutoff, worst_i, worst_j);
    std::ostringstream os;
    os << "density is not Hermitian: |rho(i,j) - conj(rho(j,i))| = " << worst_dev
       << " at <" << e.n1 << "," << e.n2 << "|rho|" << e.m1 << "," << e.m2
       << "> (tolerance 1e-10)";
    throw ValidationError(os.str());
  }

  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "density trace is " << trace << ", deviating from 1 by "
       << std::abs(trace - 1.0) << " (tolerance 1e-8)";
    throw ValidationError(os.str());
  }

  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw ValidationError("density eigenvalue check failed to converge");
  }
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-8) {
    std::ostringstream os;
    os << "density is not positive semidefinite: smallest eigenvalue " << min_eig
       << " (tolerance -1e-8)";
    throw ValidationError(os.str());
  }
}

ExplicitDensityMatrix parse_density_text(std::string_view text) {
  const std::vector<std::string> tokens = tokenize(text);
  std::size_t pos = 0;
  const auto next = [&](const char* what) -> const std::string& {
    if (pos >= tokens.size()) {
      std::ostringstream os;
      os << "unexpected end of input: expected " << what;
      throw ParseError(os.str());
    }
    return tokens[pos++];
  };

  if (next("the 'n_max' keyword") != "n_max") {
    std::ostringstream os;
    os << "expected the 'n_max' keyword first, got '" << tokens[pos - 1] << "'";
    throw ParseError(os.str());
  }
  const int n_max = parse_int(next("the n_max value"), "n_max");
  if (n_max < 1) {
    std::ostringstream os;
    os << "n_max must be at least 1, got " << n_max;
    throw ValidationError(os.str());
  }
  if (next("the 'rho' keyword") != "rho") {
    std::ostringstream os;
    os << "expected the 'rho' keyword after n_max, got '" << tokens[pos - 1] << "'";
    throw ParseError(os.str());
  }

  ExplicitDensityMatrix density;
  density.cutoff = Cutoff{n_max, 0};
  const int dim = density.cutoff.dim();
  const std::size_t n_entries = static_cast<std::size_t>(dim) * dim;
  const std::size_t remaining = tokens.size() - pos;
  if (remaining != 2 * n_entries) {
    std::ostringstream os;
    os << "n_max = " << n_max << " requires " << n_entries
       << " re/im pairs (row-major over index(n1,n2)), found " << remaining / 2
       << (remaining % 2 ? " and a dangling token" : "");
    throw ParseError(os.str());
  }
  density.rho.resize(dim, dim);
  for (std::size_t k = 0; k < n_entries; ++k) {
    const double re = parse_real(tokens[pos++], k, "real");
    const double im = parse_real(tokens[pos++], k, "imaginary");
    density.rho(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) =
        Complex(re, im);
  }
  validate_density(density.rho, density.cutoff);
  return density;
}

ExplicitDensityMatrix read_density_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open density file '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_density_text(buffer.str());
}

std::string format_density_text(const ExplicitDensityMatrix& density) {
  const int dim = density.cutoff.dim();
  if (density.rho.rows() != dim || density.rho.cols() != dim) {
    std::ostringstream os;
    os << "density is " << density.rho.rows() << "x" << density.rho.cols()
       << " but n_max = " << density.cutoff.n_max << " requires " << dim << "x" << dim;
    throw DimensionMismatch(os.str());
  }
  std::string out = "n_max " + std::to_string(density.cutoff.n_max) + "\nrho\n";
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out += format_real(density.rho(i, j).real());
      out += ' ';
      out += format_real(density.rho(i, j).imag());
      out += j + 1 == dim ? '\n' : ' ';
    }
  }
  return out;
}

void write_density_file(const std::string& path, const ExplicitDensityMatrix& density) {
  const std::string text = format_density_text(density);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ParseError("cannot open density file '" + path + "' for writing");
  }
  out << text;
  if (!out) {
    throw ParseError("failed while writing density file '" + path + "'");
  }
}

}  // namespace mandelq
