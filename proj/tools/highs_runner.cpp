// mcfod-highs: reads an MPS file with HiGHS and writes the mcfod solution
// file grammar (see docs/formats.md).
//
//   mcfod-highs <model.mps> <model.sol> [time_limit_seconds]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using HighsInt = std::int32_t;

// The pip wheel ships the shared library without headers; these are the
// C API prototypes we use.
extern "C" {
void* Highs_create(void);
void Highs_destroy(void* highs);
HighsInt Highs_getSizeofHighsInt(const void* highs);
HighsInt Highs_readModel(void* highs, const char* filename);
HighsInt Highs_run(void* highs);
HighsInt Highs_getModelStatus(const void* highs);
HighsInt Highs_getNumCol(const void* highs);
HighsInt Highs_getNumRow(const void* highs);
HighsInt Highs_getColName(const void* highs, HighsInt col, char* name);
HighsInt Highs_getSolution(const void* highs, double* col_value, double* col_dual, double* row_value,
                           double* row_dual);
HighsInt Highs_setBoolOptionValue(void* highs, const char* option, HighsInt value);
HighsInt Highs_setIntOptionValue(void* highs, const char* option, HighsInt value);
HighsInt Highs_setDoubleOptionValue(void* highs, const char* option, double value);
HighsInt Highs_getIntInfoValue(const void* highs, const char* info, HighsInt* value);
double Highs_getObjectiveValue(const void* highs);
}

namespace {

constexpr HighsInt kError = -1;
constexpr HighsInt kModelEmpty = 6;
constexpr HighsInt kOptimal = 7;
constexpr HighsInt kInfeasible = 8;
constexpr HighsInt kUnboundedOrInfeasible = 9;
constexpr HighsInt kUnbounded = 10;
constexpr HighsInt kTimeLimit = 13;
constexpr HighsInt kIterationLimit = 14;
constexpr HighsInt kSolutionFeasible = 2;
constexpr int kMaxName = 512;

int fail(const char* msg) {
  std::fprintf(stderr, "mcfod-highs: %s\n", msg);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3 || argc > 4) return fail("usage: mcfod-highs <model.mps> <model.sol> [time_limit]");
  const double time_limit = argc == 4 ? std::atof(argv[3]) : 0.0;

  void* h = Highs_create();
  if (!h) return fail("cannot create a HiGHS instance");
  if (Highs_getSizeofHighsInt(h) != sizeof(HighsInt)) return fail("libhighs was built with 64-bit HighsInt");
  Highs_setBoolOptionValue(h, "output_flag", 0);
  Highs_setIntOptionValue(h, "threads", 1);
  Highs_setDoubleOptionValue(h, "mip_rel_gap", 0.0);
  Highs_setDoubleOptionValue(h, "mip_feasibility_tolerance", 1e-7);
  if (time_limit > 0) Highs_setDoubleOptionValue(h, "time_limit", time_limit);

  if (Highs_readModel(h, argv[1]) == kError) {
    Highs_destroy(h);
    return fail("cannot read the MPS file");
  }
  const HighsInt ncol = Highs_getNumCol(h);
  const HighsInt nrow = Highs_getNumRow(h);
  HighsInt status = kModelEmpty;
  if (ncol > 0) {
    if (Highs_run(h) == kError) {
      Highs_destroy(h);
      return fail("HiGHS run failed");
    }
    status = Highs_getModelStatus(h);
  }

  const char* word = "ERROR";
  bool values = false;
  HighsInt primal = 0;
  Highs_getIntInfoValue(h, "primal_solution_status", &primal);
  switch (status) {
    case kModelEmpty: word = "OPTIMAL"; break;
    case kOptimal: word = "OPTIMAL"; values = true; break;
    case kInfeasible: word = "INFEASIBLE"; break;
    case kUnbounded:
    case kUnboundedOrInfeasible: word = "ERROR"; break;
    case kTimeLimit:
    case kIterationLimit:
      word = "TIMEOUT";
      values = primal == kSolutionFeasible;
      break;
    default: break;
  }

  std::FILE* out = std::fopen(argv[2], "w");
  if (!out) {
    Highs_destroy(h);
    return fail("cannot write the solution file");
  }
  std::fprintf(out, "# mcfod-highs model_status %d\n", static_cast<int>(status));
  std::fprintf(out, "status %s\n", word);
  if (values) {
    std::vector<double> col(ncol), row(nrow > 0 ? nrow : 1);
    std::vector<double> col_dual(ncol), row_dual(nrow > 0 ? nrow : 1);
    Highs_getSolution(h, col.data(), col_dual.data(), row.data(), row_dual.data());
    std::fprintf(out, "# solver objective %.17g\n", Highs_getObjectiveValue(h));
    char name[kMaxName];
    for (HighsInt c = 0; c < ncol; ++c) {
      if (Highs_getColName(h, c, name) == kError) {
        std::fclose(out);
        Highs_destroy(h);
        return fail("cannot read a column name");
      }
      std::fprintf(out, "%s %.17g\n", name, col[c]);
    }
  }
  std::fclose(out);
  Highs_destroy(h);
  return 0;
}
