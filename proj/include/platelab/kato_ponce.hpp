#pragma once

#include "platelab/grid.hpp"
#include "platelab/norms.hpp"
#include "platelab/rational.hpp"
#include "platelab/test_function.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace platelab {

struct KPIndices {
  LebesgueExponent r, r1, r2, r3, r4;
};

/// 1/r = 1/r1 + 1/r2 = 1/r3 + 1/r4 with r2, r3 in (1, inf) (hence r1, r4 in
/// (1, inf]) and r in (1, inf).
Verdict validate_kp_indices(const KPIndices& idx);

struct HolderIndices {
  LebesgueExponent r, r1, r2;
  Rational s, s1, s2;
};

/// 1/r = 1/r1 + 1/r2 + (s - s1 - s2)/d, 0 <= s <= min(s1, s2), r, r1, r2 in (1, inf).
Verdict validate_holder_indices(const HolderIndices& idx, int d);
/// The embeddings behind the Hölder-type bound need s_i < d/r_i whenever s_i > 0.
/// The relation alone does not imply this; d = 1, s = s1 = s2 = 1, r = 2, r1 = r2 = 4/3
/// passes the relation but the ratio is unbounded (wide f against a fixed g).
Verdict holder_embedding_hypotheses(const HolderIndices& idx, int d);

/// || |D|^s (fg) ||_r / (||f||_r1 || |D|^s g ||_r2 + || |D|^s f ||_r3 ||g||_r4).
double kp_ratio(const TestFunction& f, const TestFunction& g, double s, const KPIndices& idx, const Grid& grid);
double kp_ratio(const Field& f, const Field& g, double s, const KPIndices& idx);

/// ||fg||_{W^{s,r}} / (||f||_{W^{s1,r1}} ||g||_{W^{s2,r2}}).
double holder_ratio(const TestFunction& f, const TestFunction& g, const HolderIndices& idx, const Grid& grid);
double holder_ratio(const Field& f, const Field& g, const HolderIndices& idx);

/// ||S_lambda f||_{W^{s,r}} / (lambda^{s - d/r} ||f||_{W^{s,r}}). f is sampled on
/// base; S_lambda f on a box of half-width L max(1, 1/lambda) and spacing
/// h min(1, 1/lambda). Both samplings must be resolved to resolution_tol.
double dilation_scaling_check(const TestFunction& f, double lambda, double s, const LebesgueExponent& r,
                              const Grid& base, double resolution_tol = 1e-12);
Grid dilation_grid(const Grid& base, double lambda);

struct KPTuple {
  std::string id;
  KPIndices idx;
};
struct HolderTuple {
  std::string id;
  HolderIndices idx;
};

/// Index tuples exercised by the ensembles; the Hölder set depends on d and
/// holds only the tuples that satisfy the index relation there.
std::vector<KPTuple> standard_kp_tuples();
std::vector<HolderTuple> standard_holder_tuples(int d);

/// Sampling grid and parameter distribution for ensemble runs in dimension d.
Grid kp_ensemble_grid(int d);
EnsembleSpec kp_ensemble_spec(int d, const Grid& grid);

struct KPSample {
  std::string tuple_id;
  int d = 0;
  double s = 0.0;
  std::string indices;
  std::uint64_t seed = 0;
  int member = 0;
  double ratio = 0.0;
};

struct KPEnsembleOptions {
  int d = 1;
  int count = 200;
  std::uint64_t seed = 1;
  std::vector<double> s_values{0.0, 1.0, 2.0};
};

/// Draws count pairs (f, g) and evaluates every KP tuple for each s and every
/// Hölder tuple (whose s is fixed by the tuple and must be in s_values).
std::vector<KPSample> run_kp_ensemble(const KPEnsembleOptions& opts);

/// Key "tuple_id|d|s" for fixture constants.
std::string fixture_key(const std::string& tuple_id, int d, double s);
/// Largest ratio per fixture key.
std::map<std::string, double> max_ratios(const std::vector<KPSample>& samples);

void write_kp_csv_header(std::ostream& os);
void write_kp_csv_row(std::ostream& os, const KPSample& s);
void write_fixture(std::ostream& os, const std::map<std::string, double>& constants, std::uint64_t seed, int count);
std::map<std::string, double> read_fixture(std::istream& is);

} // namespace platelab
