#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergopt/asymptotics.hpp"
#include "ergopt/discounted.hpp"
#include "ergopt/minmean.hpp"
#include "ergopt/subaction.hpp"
#include "ergopt/system.hpp"

namespace ergopt {

using Json = nlohmann::ordered_json;

/// Parse error carrying the offending file for exit-code-2 diagnostics.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A loaded phase space: either a finite edge shift or a circle rotation
/// (the rotation file carries its observable inline).
struct LoadedSystem {
    std::variant<FiniteSystem, RotationSystem> space;
    std::optional<FourierObservable> rotation_observable;

    bool is_finite() const { return std::holds_alternative<FiniteSystem>(space); }
    const FiniteSystem& finite() const;
    const RotationSystem& rotation() const;
};

LoadedSystem load_system_file(const std::string& path);
FiniteSystem parse_finite_system(const Json& doc);
RotationSystem parse_rotation(const Json& doc);
FourierObservable parse_fourier(const Json& doc);

/// Observable file: {"weights": {...}} or Fourier {"constant","cos","sin"}.
/// Numeric weights are read exactly (string weights verbatim, JSON numbers
/// via their shortest decimal form).
std::variant<EdgeObservable, FourierObservable> load_observable_file(const std::string& path,
                                                                     const FiniteSystem* sys);
EdgeObservable parse_edge_observable(const Json& doc, const FiniteSystem& sys);

SymbolicPoint load_point_file(const std::string& path, const FiniteSystem& sys);
SymbolicPoint parse_point(const Json& doc, const FiniteSystem& sys);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Report serialization. Field names are part of the output contract; extra
// *_exact fields carry the rational values verbatim.
Json min_mean_to_json(const FiniteSystem& sys, const MinMeanResult& result);
Json critical_to_json(const FiniteSystem& sys, const CriticalSubgraph& critical, const Rat& fbar);
Json balance_to_json(const FiniteSystem& sys, const BalanceReport& report);
Json point_to_json(const FiniteSystem& sys, const SymbolicPoint& point);
Json subcohomology_to_json(const SubcohomologyReport& report);
Json bound_estimate_to_json(const BoundEstimate& estimate);
Json corollary_to_json(const CorollaryReport& report);
Json discounted_to_json(const DiscountedEvaluation& eval);
Json decomposition_to_json(const DecompositionReport& report);
Json schedule_to_json(const FiniteSystem& sys, const OscillationSchedule& sched);

/// Formats eps from log space: a plain shortest double when representable,
/// otherwise a mantissa/exponent decimal like "1.18e-3516".
std::string format_eps(double ln_eps);

/// Minimal CSV writer: fixed column order, shortest round-trip floats,
/// RFC-style quoting only when needed.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    std::string str() const;
    /// Same table as {"rows": [{column: cell, ...}, ...]} for --format json.
    Json to_json() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace ergopt
