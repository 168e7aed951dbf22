#include "smldm/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace smldm {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const std::array kSweepable = {"n_rm", "n_rf", "snr_ml_db", "snr_fl_db", "injection_level_db", "n_t"};

}  // namespace

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = {
        "command",     "description", "scheme",      "schemes",     "nt",        "nrm",
        "nrf",         "il-db",       "snr-ml-db",   "snr-fl-db",   "power",     "share-ml",
        "share-fl",    "layers",      "mode",        "sweep",       "values",    "series",
        "series-values", "sinr-source", "trials",    "mi-samples",  "seed",      "stream",
        "nt-values",   "il-values",   "share-values",
    };
    return keys;
}

bool is_known_key(std::string_view key)
{
    const auto& keys = known_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

ParamMap parse_key_values(std::string_view text, std::string_view origin)
{
    ParamMap out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) {
            throw ValidationError(where + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!is_known_key(key)) {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

ParamMap load_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str(), path.string());
}

void overlay(ParamMap& base, const ParamMap& overrides)
{
    for (const auto& [key, value] : overrides) {
        base[key] = value;
    }
}

std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    while (true) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return out;
}

double parse_double(std::string_view text, std::string_view key)
{
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(std::string(key) + ": '" + std::string(text) + "' is not a number");
    }
    return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view key)
{
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(std::string(key) + ": '" + std::string(text) + "' is not a nonnegative integer");
    }
    return value;
}

std::size_t parse_count(std::string_view text, std::string_view key)
{
    return static_cast<std::size_t>(parse_u64(text, key));
}

std::vector<double> parse_value_list(std::string_view text)
{
    text = trim(text);
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::string_view rest = text;
        for (int i = 0; i < 3; ++i) {
            const auto colon = rest.find(':');
            if ((i < 2) == (colon == std::string_view::npos)) {
                throw ValidationError("range '" + std::string(text) + "' must be start:step:stop");
            }
            parts.push_back(parse_double(rest.substr(0, colon), "range"));
            rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
        }
        const double start = parts[0], step = parts[1], stop = parts[2];
        if (!(step > 0.0) || stop < start) {
            throw ValidationError("range '" + std::string(text) + "' needs step > 0 and stop >= start");
        }
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Round to suppress accumulated binary noise (0.1 steps etc.).
            out.push_back(std::round((start + step * static_cast<double>(i)) * 1e9) / 1e9);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse_double(item, "value list"));
    }
    return out;
}

SystemConfig system_config_from(const ParamMap& params)
{
    SystemConfig cfg;
    auto get = [&](const char* key) -> const std::string* {
        const auto it = params.find(key);
        return it == params.end() ? nullptr : &it->second;
    };
    if (auto v = get("nt")) cfg.n_t = parse_count(*v, "nt");
    if (auto v = get("nrm")) cfg.n_rm = parse_count(*v, "nrm");
    if (auto v = get("nrf")) cfg.n_rf = parse_count(*v, "nrf");
    if (auto v = get("il-db")) cfg.injection_level_db = parse_double(*v, "il-db");
    if (auto v = get("snr-ml-db")) cfg.snr_ml_db = parse_double(*v, "snr-ml-db");
    if (auto v = get("snr-fl-db")) cfg.snr_fl_db = parse_double(*v, "snr-fl-db");
    if (auto v = get("power")) cfg.total_power = parse_double(*v, "power");
    cfg.validate();
    return cfg;
}

TdmFdmShare share_from(const ParamMap& params)
{
    TdmFdmShare share;
    if (auto it = params.find("share-ml"); it != params.end()) share.l_ml = parse_double(it->second, "share-ml");
    if (auto it = params.find("share-fl"); it != params.end()) share.l_fl = parse_double(it->second, "share-fl");
    share.validate();
    return share;
}

bool is_sweepable(std::string_view name)
{
    return std::find(kSweepable.begin(), kSweepable.end(), name) != kSweepable.end();
}

void set_parameter(SystemConfig& cfg, std::string_view name, double value)
{
    auto as_count = [&](double v) {
        if (!(v >= 1.0) || v != std::floor(v)) {
            throw ValidationError(std::string(name) + " must be a positive integer");
        }
        return static_cast<std::size_t>(v);
    };
    if (name == "n_rm") cfg.n_rm = as_count(value);
    else if (name == "n_rf") cfg.n_rf = as_count(value);
    else if (name == "n_t") cfg.n_t = as_count(value);
    else if (name == "snr_ml_db") cfg.snr_ml_db = value;
    else if (name == "snr_fl_db") cfg.snr_fl_db = value;
    else if (name == "injection_level_db") cfg.injection_level_db = value;
    else throw ValidationError("'" + std::string(name) + "' cannot be swept");
}

std::string format_double(double value)
{
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::filesystem::path preset_directory()
{
    if (const char* env = std::getenv("SMLDM_PRESET_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
#ifdef SMLDM_SOURCE_PRESET_DIR
    if (std::filesystem::is_directory(SMLDM_SOURCE_PRESET_DIR)) return SMLDM_SOURCE_PRESET_DIR;
#endif
#ifdef SMLDM_INSTALL_PRESET_DIR
    return SMLDM_INSTALL_PRESET_DIR;
#else
    return "presets";
#endif
}

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    const auto dir = preset_directory();
    if (!std::filesystem::is_directory(dir)) return names;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".cfg") {
            names.push_back(entry.path().stem().string());
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

ParamMap load_preset(std::string_view name)
{
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string msg = "unknown preset '" + std::string(name) + "'; valid presets:";
        for (const auto& n : names) msg += " " + n;
        throw ValidationError(msg);
    }
    return load_key_values(preset_directory() / (std::string(name) + ".cfg"));
}

}  // namespace smldm
