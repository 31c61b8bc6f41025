#pragma once

// Quantitative witnesses for the negative results: each builds the
// offending function, measures the quantity that fails to converge, and
// compares it row by row with a closed-form oracle.

#include <string>
#include <utility>
#include <vector>

#include "sobolev/calculus.hpp"

namespace sobolev::counterexamples {

enum class Verdict { ConfirmsFailure, Unexpected };
const char* to_string(Verdict v);

struct WitnessRow {
  double param = 0.0;
  double measured = 0.0;
  double oracle = 0.0;
  double ratio = 0.0;  // measured / oracle
  double aux = 0.0;    // secondary parameter (t for the c0 witness)
};

struct WitnessTable {
  std::string name;
  std::string parameter;  // "h", "N", ...
  std::vector<WitnessRow> rows;
  /// Named side quantities: fitted slopes, positive-side bounds, contrast errors.
  std::vector<std::pair<std::string, double>> metrics;
  bool positive_side_holds = true;
  std::string note;
  Verdict verdict = Verdict::Unexpected;

  double metric(const std::string& key) const;
};

/// Every ratio within [0.9, 1.1].
bool rows_track_oracle(const std::vector<WitnessRow>& rows);

/// u(t) = 1_{(0,t)} in L^r(0,1) sampled on `coords` cells. Rows: the quotient
/// ||u(t+h) - u(t)|| / h against h^{1/r - 1}. The positive side runs the
/// scalar criterion on <u(.), g> for bounded densities g over a time grid of
/// `time_cells` cells.
WitnessTable indicator_path_witness(double r, const std::vector<double>& h_list, std::size_t coords = 4096,
                                    double t = 0.25, std::size_t time_cells = 256);

/// Candidate derivative (cos(nt))_{n <= N} of u(t) = (sin(nt)/n): rows are
/// (N, max_{N/2 < n <= N} |cos(nt)|) against 1, for every t in t_samples.
/// The positive side checks coordinate paths and the 2^{-n} pairing.
WitnessTable c0_sine_witness(const std::vector<std::size_t>& n_list, const std::vector<double>& t_samples);

/// u(t)(r) = r - t in C([0,1]) sampled at grid_k points. Rows: sup distance
/// between the quotient of u^+ and -1_{(t,1)}, against 1. The contrast is
/// the same u in L^2(0,1), where the positive-part field matches central
/// differences of u^+ up to sqrt(h/6).
WitnessTable ck_pospart_witness(const std::vector<double>& h_list, std::size_t grid_k, double t = 0.3 + 1.234e-6);

}  // namespace sobolev::counterexamples
