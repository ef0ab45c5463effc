#include "dst/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dst/errors.hpp"

namespace dst {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
    static const std::vector<std::string> keys = {
        "model.widths", "model.activation", "model.init_seed",
        "task.kind", "task.input_dim", "task.output_dim", "task.samples", "task.noise",
        "task.seed", "task.teacher_hidden", "task.class_spread",
        "task.shift_fraction", "task.shift_scale", "task.shift_seed",
        "opt.kind", "opt.lr", "opt.beta", "opt.beta1", "opt.beta2", "opt.eps",
        "train.method", "train.steps", "train.batch_size", "train.loss", "train.seed",
        "train.checkpoint_interval", "train.holdout_fraction",
        "train.mask_fraction", "train.mask_seed",
        "dst.epsilon", "dst.distance", "dst.scheme", "dst.selection", "dst.m", "dst.r",
        "dst.churn", "dst.normalization", "dst.norm_granularity",
        "pretrain.steps", "pretrain.lr", "pretrain.opt", "pretrain.batch_size",
        "pretrain.loss", "pretrain.seed",
        "sweep.lrs", "sweep.epsilons", "sweep.seeds",
    };
    return keys;
}

void RunConfig::set_checked(const std::string& key, const std::string& value,
                            const std::string& where) {
    const auto& known = known_keys();
    if (std::find(known.begin(), known.end(), key) == known.end())
        throw ConfigError("unknown config key '" + key + "' (" + where + ")");
    values_[key] = value;
}

RunConfig RunConfig::parse_text(std::string_view text, const std::string& origin) {
    RunConfig cfg;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at " + where + ": '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key at " + where);
        cfg.set_checked(key, value, where);
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

void RunConfig::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    set_checked(key, value, "--set");
}

std::string RunConfig::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not a number: '" + text + "'");
    }
}

int64_t parse_int(const std::string& key, const std::string& text) {
    int64_t v = 0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("config key '" + key + "' is not an integer: '" + text + "'");
    return v;
}

uint64_t parse_seed(const std::string& key, const std::string& text) {
    uint64_t v = 0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("config key '" + key + "' is not a seed value: '" + text + "'");
    return v;
}

}  // namespace

double RunConfig::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int64_t RunConfig::get_int(const std::string& key) const {
    return parse_int(key, get_string(key));
}

int64_t RunConfig::get_int(const std::string& key, int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

uint64_t RunConfig::get_seed(const std::string& key, uint64_t fallback) const {
    return has(key) ? parse_seed(key, get_string(key)) : fallback;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(get_string(key))) out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

std::vector<size_t> RunConfig::get_size_list(const std::string& key) const {
    std::vector<size_t> out;
    for (const auto& item : split_list(get_string(key))) {
        const int64_t v = parse_int(key, item);
        if (v < 0) throw ConfigError("config key '" + key + "' has a negative entry");
        out.push_back(static_cast<size_t>(v));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

std::vector<uint64_t> RunConfig::get_seed_list(const std::string& key) const {
    std::vector<uint64_t> out;
    for (const auto& item : split_list(get_string(key))) out.push_back(parse_seed(key, item));
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

}  // namespace dst
