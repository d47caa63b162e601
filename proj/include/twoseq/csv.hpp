#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "twoseq/harness.hpp"
#include "twoseq/params.hpp"

namespace twoseq {

inline constexpr const char* kSimCsvHeader =
    "n,beta,epsilon,a,b,sigma,estimator,replications,mse,mse_stderr,mean_estimate,true_q,seed";

/// Header plus one LF-terminated line per row; reals use %.17g so a read
/// back is lossless.
void write_sim_csv(std::ostream& out, const std::vector<SimRow>& rows);
std::vector<SimRow> read_sim_csv(std::istream& in);

void write_sim_csv_file(const std::string& path, const std::vector<SimRow>& rows);
std::vector<SimRow> read_sim_csv_file(const std::string& path);

/// Paired observations with header "x,y".
ObservationPair read_pairs_csv(std::istream& in);
ObservationPair read_pairs_csv_file(const std::string& path);
void write_pairs_csv(std::ostream& out, const ObservationPair& obs);

}  // namespace twoseq
