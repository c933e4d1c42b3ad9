#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "wdt/tfim.hpp"

namespace wdt {

inline constexpr int kStoreFormatVersion = 1;

// On-disk cache of correlator tables, one CSV file per record.  A record is
// keyed by (g, n_max, quad_tol, format_version), all encoded at full decimal
// round-trip precision, and is immutable once written.
class TableStore {
public:
    explicit TableStore(std::filesystem::path dir);

    // Persists the table atomically (temp file + rename).  Re-putting an
    // identical table is a no-op; a key collision with different payload
    // raises VersionConflict.  Returns the cache key (the file stem).
    std::string put_table(const CorrelatorTable& t);

    // Exact-key lookup, falling back to serving a prefix of any stored table
    // with the same (g, quad_tol) and a larger n_max.
    std::optional<CorrelatorTable> get_table(double g, int n_max, double quad_tol);

    const std::filesystem::path& dir() const { return dir_; }

    static std::string cache_key(double g, int n_max, double quad_tol);

private:
    std::filesystem::path dir_;
};

// Cache-through wrapper: serves from the store when possible, computing and
// persisting otherwise.  A null store degrades to a plain computation.
CorrelatorTable get_or_compute(TableStore* store, double g, int n_max,
                               const QuadratureConfig& cfg);

namespace detail {
std::string serialize_table(const CorrelatorTable& t);
CorrelatorTable parse_table(const std::string& text, const std::string& origin);
}  // namespace detail

}  // namespace wdt
