#include "wdt/store.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "wdt/errors.hpp"
#include "wdt/format.hpp"

namespace wdt {

namespace {

const char* method_name(CorrelatorMethod m) {
    return m == CorrelatorMethod::LEVINSON_MINORS ? "LEVINSON_MINORS" : "LU_PER_N";
}

CorrelatorMethod method_from(const std::string& s, const std::string& origin) {
    if (s == "LEVINSON_MINORS") return CorrelatorMethod::LEVINSON_MINORS;
    if (s == "LU_PER_N") return CorrelatorMethod::LU_PER_N;
    throw IoFailure(origin + ": unknown method '" + s + "'");
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoFailure("cannot read " + p.string());
    return ss.str();
}

}  // namespace

namespace detail {

std::string serialize_table(const CorrelatorTable& t) {
    std::ostringstream out;
    out << "# format_version: " << kStoreFormatVersion << "\n";
    out << "# g: " << format_double(t.g) << "\n";
    out << "# n_max: " << t.n_max << "\n";
    out << "# quad_tol: " << format_double(t.tol) << "\n";
    out << "# method: " << method_name(t.method) << "\n";
    out << "n,value\n";
    for (int n = 1; n <= t.n_max; ++n)
        out << n << "," << format_double(t.values[static_cast<size_t>(n - 1)]) << "\n";
    return out.str();
}

CorrelatorTable parse_table(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    CorrelatorTable t;
    int version = -1;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto colon = line.find(':');
            if (colon == std::string::npos) throw IoFailure(origin + ": malformed header line");
            std::string key = line.substr(2, colon - 2);
            std::string val = line.substr(colon + 2);
            if (key == "format_version") version = std::stoi(val);
            else if (key == "g") t.g = parse_double(val);
            else if (key == "n_max") t.n_max = std::stoi(val);
            else if (key == "quad_tol") t.tol = parse_double(val);
            else if (key == "method") t.method = method_from(val, origin);
            continue;
        }
        if (!header_done) {
            if (line != "n,value") throw IoFailure(origin + ": expected 'n,value' header");
            header_done = true;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw IoFailure(origin + ": malformed row '" + line + "'");
        int n = std::stoi(line.substr(0, comma));
        if (n != static_cast<int>(t.values.size()) + 1)
            throw IoFailure(origin + ": rows out of order at n = " + std::to_string(n));
        t.values.push_back(parse_double(line.substr(comma + 1)));
    }
    if (version != kStoreFormatVersion)
        throw VersionConflict(origin + ": format_version " + std::to_string(version) +
                              " != " + std::to_string(kStoreFormatVersion));
    if (static_cast<int>(t.values.size()) != t.n_max)
        throw IoFailure(origin + ": row count " + std::to_string(t.values.size()) +
                        " != n_max " + std::to_string(t.n_max));
    return t;
}

}  // namespace detail

TableStore::TableStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoFailure("cannot create cache directory " + dir_.string());
}

std::string TableStore::cache_key(double g, int n_max, double quad_tol) {
    return "g" + format_double(g) + "_n" + std::to_string(n_max) + "_tol" +
           format_double(quad_tol) + "_v" + std::to_string(kStoreFormatVersion);
}

std::string TableStore::put_table(const CorrelatorTable& t) {
    std::string key = cache_key(t.g, t.n_max, t.tol);
    std::filesystem::path target = dir_ / (key + ".csv");
    std::string payload = detail::serialize_table(t);

    if (std::filesystem::exists(target)) {
        if (read_file(target) == payload) return key;
        throw VersionConflict("cache key " + key + " exists with different payload in " +
                              dir_.string());
    }

    static std::atomic<uint64_t> counter{0};
    std::filesystem::path tmp =
        dir_ / (key + ".tmp." + std::to_string(counter.fetch_add(1)) + "." +
                std::to_string(static_cast<uint64_t>(
                    std::hash<std::string>{}(dir_.string()) & 0xffff)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot create " + tmp.string());
        out << payload;
        out.flush();
        if (!out) throw IoFailure("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoFailure("cannot publish " + target.string());
    }
    return key;
}

std::optional<CorrelatorTable> TableStore::get_table(double g, int n_max, double quad_tol) {
    std::filesystem::path exact = dir_ / (cache_key(g, n_max, quad_tol) + ".csv");
    if (std::filesystem::exists(exact))
        return detail::parse_table(read_file(exact), exact.string());

    // Prefix service: any stored table with the same (g, quad_tol) and a
    // larger n_max contains the requested one.
    std::string prefix = "g" + format_double(g) + "_n";
    std::string suffix = "_tol" + format_double(quad_tol) + "_v" +
                         std::to_string(kStoreFormatVersion) + ".csv";
    int best = -1;
    std::filesystem::path best_path;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
        std::string name = entry.path().filename().string();
        if (name.size() <= prefix.size() + suffix.size()) continue;
        if (name.compare(0, prefix.size(), prefix) != 0) continue;
        if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
        std::string mid = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
        int stored_n = 0;
        try {
            stored_n = std::stoi(mid);
        } catch (...) {
            continue;
        }
        if (std::to_string(stored_n) != mid) continue;
        if (stored_n > n_max && (best < 0 || stored_n < best)) {
            best = stored_n;
            best_path = entry.path();
        }
    }
    if (best < 0) return std::nullopt;

    CorrelatorTable t = detail::parse_table(read_file(best_path), best_path.string());
    t.values.resize(static_cast<size_t>(n_max));
    t.n_max = n_max;
    return t;
}

CorrelatorTable get_or_compute(TableStore* store, double g, int n_max,
                               const QuadratureConfig& cfg) {
    if (store) {
        if (auto hit = store->get_table(g, n_max, cfg.target_abs_tol)) return *hit;
    }
    CorrelatorTable t = correlator_table(g, n_max, cfg);
    if (store) store->put_table(t);
    return t;
}

}  // namespace wdt
