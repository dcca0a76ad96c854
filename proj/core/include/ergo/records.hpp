#pragma once

// One line per chain size: the subsystem energy decomposition as written by
// the scan commands. CSV uses 12 significant digits, '.' decimals and LF
// endings; JSON lines carry the same keys in the same order.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/energy.hpp"

namespace ergo {

struct ScanRecord {
    std::string model;
    std::size_t n = 0;
    std::size_t ell = 0;
    double energy = 0.0;
    double block_energy = 0.0;
    double passive = 0.0;
    double block_ground = 0.0;
    double excess = 0.0;
    double ergotropy = 0.0;
    double bound = 0.0;
    double ergotropy_fraction = 0.0;
    double bound_fraction = 0.0;
    double entropy = 0.0;
    double ent_gap = 0.0;
    std::optional<std::size_t> schmidt_chi;  // empty on the Gaussian path
};

enum class RecordFormat { csv, json };

inline constexpr std::string_view kCsvHeader =
    "model,N,ell,E,E_A,E_tilde,E_A0,delta_E,W,Q,w_frac,q_frac,S,ent_gap,schmidt_chi";

ScanRecord make_record(std::string model, const EnergyDecomposition& d,
                       std::optional<std::size_t> schmidt_chi = std::nullopt);

/// %.12g with negative zero written as 0; throws InputError for non-finite
/// values.
std::string format_number(double x);

std::string to_csv_row(const ScanRecord& r);
std::string to_json_line(const ScanRecord& r);

/// Header (CSV only) followed by one line per record.
void write_records(std::ostream& out, std::span<const ScanRecord> records, RecordFormat format);

/// Reads either format; JSON lines are recognised by a leading '{'.
/// Throws ParseError naming the offending line.
std::vector<ScanRecord> read_records(std::istream& in);

}  // namespace ergo
