#include "scorecast/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "scorecast/csv.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/rng.hpp"

namespace scorecast {

namespace {

/**
 * Minimal key-value config format (a TOML subset): `[section]` headers,
 * `key = value` lines, `#` comments. Values are integers, floats, booleans,
 * double-quoted strings, or flat arrays of those.
 */
struct Value {
    enum class Kind { Integer, Float, Boolean, String, Array };
    Kind kind = Kind::Integer;
    std::int64_t integer = 0;
    double real = 0.0;
    bool boolean = false;
    std::string text;
    std::vector<Value> items;
};

using Section = std::map<std::string, Value>;
using Tree = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Removes a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

Value parse_scalar(const std::string& token, const std::string& where) {
    if (token.empty()) {
        throw DataError(where + ": empty value");
    }
    Value v;
    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"') {
            throw DataError(where + ": unterminated string " + token);
        }
        v.kind = Value::Kind::String;
        v.text = token.substr(1, token.size() - 2);
        return v;
    }
    if (token == "true" || token == "false") {
        v.kind = Value::Kind::Boolean;
        v.boolean = token == "true";
        return v;
    }
    // Integer if it parses fully as one, float otherwise.
    try {
        v.integer = parse_int(token, where);
        v.kind = Value::Kind::Integer;
        return v;
    } catch (const DataError&) {
    }
    v.real = parse_double(token, where);
    v.kind = Value::Kind::Float;
    return v;
}

Value parse_value(const std::string& raw, const std::string& where) {
    const std::string token = trim(raw);
    if (!token.empty() && token.front() == '[') {
        if (token.back() != ']') {
            throw DataError(where + ": unterminated array");
        }
        Value v;
        v.kind = Value::Kind::Array;
        const std::string inner = trim(token.substr(1, token.size() - 2));
        if (inner.empty()) {
            return v;
        }
        for (const std::string& part : split_csv(inner)) {
            v.items.push_back(parse_scalar(trim(part), where));
        }
        return v;
    }
    return parse_scalar(token, where);
}

Tree parse_tree(const std::string& text, const std::string& origin) {
    Tree tree;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        line = trim(strip_comment(line));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw DataError(where + ": malformed section header " + line);
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw DataError(where + ": empty section name");
            }
            tree[section];  // sections may be empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError(where + ": expected `key = value`, got " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw DataError(where + ": missing key");
        }
        if (section.empty() && key != "version") {
            throw DataError(where + ": key '" + key + "' outside any section");
        }
        Section& dest = tree[section];
        if (dest.count(key) != 0) {
            throw DataError(where + ": duplicate key '" + key + "'");
        }
        dest[key] = parse_value(line.substr(eq + 1), where + " (" + key + ")");
    }
    return tree;
}

// Typed access with good error messages; `used` tracks consumed keys so
// unknown ones can be rejected afterwards.
class SectionReader {
public:
    SectionReader(const Tree& tree, std::string name, const std::string& origin)
        : name_(std::move(name)), origin_(origin) {
        const auto it = tree.find(name_);
        section_ = it == tree.end() ? nullptr : &it->second;
    }

    bool present() const { return section_ != nullptr; }

    const Value* find(const std::string& key) {
        if (section_ == nullptr) {
            return nullptr;
        }
        used_.insert(key);
        const auto it = section_->find(key);
        return it == section_->end() ? nullptr : &it->second;
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        const Value* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->kind != Value::Kind::Integer) {
            throw DataError(at(key) + " must be an integer");
        }
        return v->integer;
    }

    double real(const std::string& key, double fallback) {
        const Value* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->kind == Value::Kind::Integer) {
            return static_cast<double>(v->integer);
        }
        if (v->kind != Value::Kind::Float) {
            throw DataError(at(key) + " must be a number");
        }
        return v->real;
    }

    bool boolean(const std::string& key, bool fallback) {
        const Value* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->kind != Value::Kind::Boolean) {
            throw DataError(at(key) + " must be true or false");
        }
        return v->boolean;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const Value* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->kind != Value::Kind::String) {
            throw DataError(at(key) + " must be a quoted string");
        }
        return v->text;
    }

    std::vector<std::int64_t> integer_array(const std::string& key) {
        const Value* v = find(key);
        std::vector<std::int64_t> out;
        if (v == nullptr) {
            return out;
        }
        if (v->kind != Value::Kind::Array) {
            throw DataError(at(key) + " must be an array");
        }
        for (const Value& item : v->items) {
            if (item.kind != Value::Kind::Integer) {
                throw DataError(at(key) + " must contain integers only");
            }
            out.push_back(item.integer);
        }
        return out;
    }

    std::vector<std::string> string_array(const std::string& key) {
        const Value* v = find(key);
        std::vector<std::string> out;
        if (v == nullptr) {
            return out;
        }
        if (v->kind != Value::Kind::Array) {
            throw DataError(at(key) + " must be an array");
        }
        for (const Value& item : v->items) {
            if (item.kind != Value::Kind::String) {
                throw DataError(at(key) + " must contain quoted strings only");
            }
            out.push_back(item.text);
        }
        return out;
    }

    void reject_unknown() const {
        if (section_ == nullptr) {
            return;
        }
        for (const auto& entry : *section_) {
            if (used_.count(entry.first) == 0) {
                throw DataError(origin_ + ": unknown key '" + entry.first + "' in [" + name_ +
                                "]");
            }
        }
    }

private:
    std::string at(const std::string& key) const {
        return origin_ + ": [" + name_ + "] " + key;
    }

    std::string name_;
    const std::string& origin_;
    const Section* section_;
    std::set<std::string> used_;
};

LayerSpec read_layer(const Tree& tree, const std::string& section, const std::string& origin,
                     int default_window) {
    SectionReader reader(tree, section, origin);
    LayerSpec layer;
    layer.model.kind = reader.text("kind", "lstm");
    layer.model.hidden = static_cast<int>(reader.integer("hidden", 64));
    layer.model.lambda = reader.real("lambda", 1e-4);
    layer.window = static_cast<int>(reader.integer("window", default_window));
    layer.train.epochs = static_cast<int>(reader.integer("epochs", 200));
    layer.train.batch_size = static_cast<int>(reader.integer("batch_size", 0));
    layer.train.learning_rate = reader.real("learning_rate", 1e-3);
    layer.train.stop_loss = reader.real("stop_loss", 0.0);
    layer.train.clip_norm = reader.real("clip_norm", 0.0);
    reader.reject_unknown();

    if (layer.model.kind != "lstm" && layer.model.kind != "ridge") {
        throw DataError(origin + ": [" + section + "] kind must be lstm or ridge");
    }
    if (layer.window < 1) {
        throw DataError(origin + ": [" + section + "] window must be positive");
    }
    return layer;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string& text,
                                               const std::string& origin) {
    const Tree tree = parse_tree(text, origin);
    static const std::set<std::string> known_sections = {
        "", "dataset", "injection", "split", "detector", "scorecaster", "evaluation"};
    for (const auto& entry : tree) {
        if (known_sections.count(entry.first) == 0) {
            throw DataError(origin + ": unknown section [" + entry.first + "]");
        }
    }

    ExperimentConfig config;
    {
        SectionReader top(tree, "", origin);
        config.version = static_cast<int>(top.integer("version", 1));
        top.reject_unknown();
        if (config.version != 1) {
            throw DataError(origin + ": unsupported config version " +
                            std::to_string(config.version));
        }
    }
    {
        SectionReader reader(tree, "dataset", origin);
        config.dataset.kind = reader.text("kind", "sine");
        config.dataset.length = reader.integer("length", 0);
        config.dataset.scale = reader.real("scale", 10.0);
        config.dataset.path = reader.text("path", "");
        config.dataset.columns = reader.string_array("columns");
        config.dataset.offset = reader.integer("offset", 0);
        config.dataset.limit = reader.integer("limit", -1);
        reader.reject_unknown();

        const std::string& kind = config.dataset.kind;
        if (kind == "sine" || kind == "sincos") {
            if (config.dataset.length < 2) {
                throw DataError(origin + ": [dataset] length must be at least 2");
            }
        } else if (kind == "csv") {
            if (config.dataset.path.empty()) {
                throw DataError(origin + ": [dataset] csv needs a path");
            }
            if (config.dataset.columns.empty()) {
                throw DataError(origin + ": [dataset] csv needs a columns array");
            }
        } else {
            throw DataError(origin + ": [dataset] kind must be sine, sincos, or csv");
        }
    }
    {
        SectionReader reader(tree, "injection", origin);
        config.injection.mode = reader.text("mode", "none");
        config.injection.period = static_cast<int>(reader.integer("period", 50));
        config.injection.count = reader.integer("count", 0);
        config.injection.rate = reader.real("rate", 0.0);
        config.injection.lag = static_cast<int>(reader.integer("lag", 10));
        config.injection.source_dim = static_cast<int>(reader.integer("source_dim", 2));
        config.injection.target_dim = static_cast<int>(reader.integer("target_dim", 1));
        config.injection.noise.mean = reader.real("noise_mean", 0.0);
        config.injection.noise.sd = reader.real("noise_sd", 0.5);
        config.injection.noise.relative_to_std = reader.boolean("relative_to_std", false);
        config.injection.noise.random_mean_sign = reader.boolean("random_mean_sign", false);
        reader.reject_unknown();

        const std::string& mode = config.injection.mode;
        if (mode != "none" && mode != "periodic" && mode != "delayed-pair") {
            throw DataError(origin + ": [injection] mode must be none, periodic, or delayed-pair");
        }
        if (mode == "periodic" && config.injection.period < 1) {
            throw DataError(origin + ": [injection] period must be positive");
        }
        if (mode == "delayed-pair") {
            if (config.injection.count < 0 ||
                (config.injection.count == 0 && !(config.injection.rate > 0.0))) {
                throw DataError(origin + ": [injection] delayed-pair needs count or rate");
            }
            if (config.injection.lag < 0) {
                throw DataError(origin + ": [injection] lag must be nonnegative");
            }
            if (config.injection.source_dim < 1 || config.injection.target_dim < 1) {
                throw DataError(origin + ": [injection] dimensions are 1-based");
            }
        }
    }
    {
        SectionReader reader(tree, "split", origin);
        for (const std::int64_t cut : reader.integer_array("cuts")) {
            config.cuts.push_back(cut);
        }
        reader.reject_unknown();
    }
    config.detector = read_layer(tree, "detector", origin, 30);
    config.scorecaster = read_layer(tree, "scorecaster", origin, 50);
    {
        SectionReader reader(tree, "evaluation", origin);
        config.evaluation.protocol = reader.text("protocol", "window");
        config.evaluation.max_horizon = static_cast<int>(reader.integer("max_horizon", 14));
        config.evaluation.horizon = reader.integer("horizon", 0);
        reader.reject_unknown();

        if (config.evaluation.protocol != "window" && config.evaluation.protocol != "sweep") {
            throw DataError(origin + ": [evaluation] protocol must be window or sweep");
        }
        if (config.evaluation.protocol == "sweep" && config.evaluation.max_horizon < 1) {
            throw DataError(origin + ": [evaluation] max_horizon must be positive");
        }
        if (config.evaluation.horizon < 0) {
            throw DataError(origin + ": [evaluation] horizon must be nonnegative");
        }
    }
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("config file not found: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str(), path);
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out << "version=" << version << "\n";
    out << "dataset.kind=" << dataset.kind << "\n";
    out << "dataset.length=" << dataset.length << "\n";
    out << "dataset.scale=" << format_double(dataset.scale) << "\n";
    out << "dataset.path=" << dataset.path << "\n";
    out << "dataset.columns=";
    for (const auto& c : dataset.columns) {
        out << c << ";";
    }
    out << "\n";
    out << "dataset.offset=" << dataset.offset << "\n";
    out << "dataset.limit=" << dataset.limit << "\n";
    out << "injection.mode=" << injection.mode << "\n";
    out << "injection.period=" << injection.period << "\n";
    out << "injection.count=" << injection.count << "\n";
    out << "injection.rate=" << format_double(injection.rate) << "\n";
    out << "injection.lag=" << injection.lag << "\n";
    out << "injection.source_dim=" << injection.source_dim << "\n";
    out << "injection.target_dim=" << injection.target_dim << "\n";
    out << "injection.noise.mean=" << format_double(injection.noise.mean) << "\n";
    out << "injection.noise.sd=" << format_double(injection.noise.sd) << "\n";
    out << "injection.noise.relative_to_std=" << injection.noise.relative_to_std << "\n";
    out << "injection.noise.random_mean_sign=" << injection.noise.random_mean_sign << "\n";
    out << "split.cuts=";
    for (const auto cut : cuts) {
        out << cut << ";";
    }
    out << "\n";
    const auto layer = [&out](const char* name, const LayerSpec& spec) {
        out << name << ".kind=" << spec.model.kind << "\n";
        out << name << ".hidden=" << spec.model.hidden << "\n";
        out << name << ".lambda=" << format_double(spec.model.lambda) << "\n";
        out << name << ".window=" << spec.window << "\n";
        out << name << ".epochs=" << spec.train.epochs << "\n";
        out << name << ".batch_size=" << spec.train.batch_size << "\n";
        out << name << ".learning_rate=" << format_double(spec.train.learning_rate) << "\n";
        out << name << ".stop_loss=" << format_double(spec.train.stop_loss) << "\n";
        out << name << ".clip_norm=" << format_double(spec.train.clip_norm) << "\n";
    };
    layer("detector", detector);
    layer("scorecaster", scorecaster);
    out << "evaluation.protocol=" << evaluation.protocol << "\n";
    out << "evaluation.max_horizon=" << evaluation.max_horizon << "\n";
    out << "evaluation.horizon=" << evaluation.horizon << "\n";
    return out.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

}  // namespace scorecast
