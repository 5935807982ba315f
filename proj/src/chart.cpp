#include "gencond/chart.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "gencond/errors.hpp"

namespace gencond {
namespace expr {

namespace {
const std::string kZero = "0";
}

Chart::Chart(std::string name, std::vector<std::string> coordinates)
    : name_(std::move(name)), coords_(std::move(coordinates)) {
    if (coords_.empty()) throw DimensionError("chart needs at least one coordinate");
    const int n = dim();
    lower_.resize(static_cast<std::size_t>(n) * (n + 1) / 2);
    lower_source_.resize(lower_.size());
    box_.assign(n, {-1.0, 1.0});
}

int Chart::tri_index(int i, int j) const {
    if (i < 0 || i >= dim() || j < 0 || j > i)
        throw DimensionError("metric component index out of range (need j <= i)");
    return i * (i + 1) / 2 + j;
}

void Chart::set_component(int i, int j, const std::string& formula_text,
                          int line_offset, int column_offset) {
    const int t = tri_index(i, j);
    lower_[t] = parse(formula_text, coords_, line_offset, column_offset);
    lower_source_[t] = formula_text;
}

void Chart::add_region(const std::string& formula_text, int line_offset, int column_offset) {
    regions_.push_back(parse(formula_text, coords_, line_offset, column_offset));
    region_source_.push_back(formula_text);
}

void Chart::set_sample_box(std::vector<std::pair<double, double>> box) {
    if (static_cast<int>(box.size()) != dim())
        throw DimensionError("sample box needs one interval per coordinate");
    for (const auto& [lo, hi] : box)
        if (!(lo < hi)) throw DimensionError("sample box interval must have lo < hi");
    box_ = std::move(box);
}

bool Chart::has_component(int i, int j) const {
    return lower_[tri_index(i > j ? i : j, i > j ? j : i)].has_value();
}

const std::string& Chart::component_source(int i, int j) const {
    const int t = tri_index(i > j ? i : j, i > j ? j : i);
    return lower_[t] ? lower_source_[t] : kZero;
}

double Chart::component_value(int i, int j, const std::vector<double>& p) const {
    const int t = tri_index(i > j ? i : j, i > j ? j : i);
    return lower_[t] ? lower_[t]->evaluate(p) : 0.0;
}

std::vector<double> Chart::metric_value(const std::vector<double>& p) const {
    const int n = dim();
    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = component_value(i, j, p);
            g[i * n + j] = v;
            g[j * n + i] = v;
        }
    return g;
}

TaylorJet Chart::component_jet(int i, int j, const std::vector<double>& p, int order) const {
    const int t = tri_index(i > j ? i : j, i > j ? j : i);
    if (!lower_[t]) return TaylorJet(JetLayout::of(dim(), order), p);
    return lower_[t]->evaluate_jet(p, order);
}

bool Chart::in_region(const std::vector<double>& p) const {
    for (const auto& r : regions_)
        if (!(r.evaluate(p) > 0.0)) return false;
    return true;
}

void Chart::require_in_region(const std::vector<double>& p) const {
    for (std::size_t k = 0; k < regions_.size(); ++k) {
        if (!(regions_[k].evaluate(p) > 0.0)) {
            std::ostringstream os;
            os << "point outside chart region: '" << region_source_[k] << "' is not positive at (";
            for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
            os << ")";
            throw RegionError(os.str());
        }
    }
}

std::string Chart::to_text() const {
    std::ostringstream os;
    os << "name " << name_ << "\n";
    os << "dimension " << dim() << "\n";
    os << "coordinates";
    for (const auto& c : coords_) os << " " << c;
    os << "\n";
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j <= i; ++j)
            if (lower_[i * (i + 1) / 2 + j])
                os << "g[" << i << "][" << j << "] = " << lower_source_[i * (i + 1) / 2 + j] << "\n";
    for (const auto& r : region_source_) os << "region " << r << "\n";
    os << "sample_box";
    for (const auto& [lo, hi] : box_) os << " " << lo << ":" << hi;
    os << "\n";
    return os.str();
}

namespace {

struct Line {
    int number;
    std::string text;
};

std::vector<Line> split_meaningful_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream is(text);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
        ++number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::size_t b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = raw.find_last_not_of(" \t\r");
        lines.push_back({number, raw.substr(b, e - b + 1)});
    }
    return lines;
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> w;
    std::string t;
    while (is >> t) w.push_back(t);
    return w;
}

}  // namespace

Chart parse_chart_text(const std::string& text, const std::string& default_name) {
    std::string name = default_name;
    int dimension = -1;
    std::vector<std::string> coords;
    std::optional<Chart> chart;

    auto require_chart = [&](int line) -> Chart& {
        if (!chart) {
            if (dimension < 0) throw ParseError("'dimension' must appear first", line, 1);
            if (coords.empty()) throw ParseError("'coordinates' must appear before this line", line, 1);
            chart.emplace(name, coords);
        }
        return *chart;
    };

    for (const Line& line : split_meaningful_lines(text)) {
        const std::string& s = line.text;
        if (s.rfind("name", 0) == 0 && (s.size() == 4 || std::isspace(static_cast<unsigned char>(s[4])))) {
            auto words = split_words(s);
            if (words.size() != 2) throw ParseError("'name' takes one word", line.number, 1);
            if (chart) throw ParseError("'name' must appear before metric components", line.number, 1);
            name = words[1];
        } else if (s.rfind("dimension", 0) == 0) {
            if (chart) throw ParseError("'dimension' must appear before metric components", line.number, 1);
            auto words = split_words(s);
            if (words.size() != 2) throw ParseError("'dimension' takes one integer", line.number, 1);
            try {
                dimension = std::stoi(words[1]);
            } catch (const std::exception&) {
                throw ParseError("'dimension' takes one integer", line.number, 1);
            }
            if (dimension < 1 || dimension > 8)
                throw ParseError("dimension must be in [1, 8]", line.number, 1);
        } else if (s.rfind("coordinates", 0) == 0) {
            auto words = split_words(s);
            words.erase(words.begin());
            if (dimension < 0)
                throw ParseError("'dimension' must appear before 'coordinates'", line.number, 1);
            if (static_cast<int>(words.size()) != dimension)
                throw ParseError("expected exactly " + std::to_string(dimension) + " coordinate names",
                                 line.number, 1);
            coords = words;
        } else if (s.rfind("region", 0) == 0) {
            const std::string formula = s.substr(6);
            if (formula.find_first_not_of(" \t") == std::string::npos)
                throw ParseError("'region' needs a formula", line.number, 1);
            require_chart(line.number).add_region(formula, line.number, 6);
        } else if (s.rfind("sample_box", 0) == 0) {
            auto words = split_words(s);
            words.erase(words.begin());
            Chart& c = require_chart(line.number);
            if (static_cast<int>(words.size()) != c.dim())
                throw ParseError("'sample_box' needs one lo:hi pair per coordinate", line.number, 1);
            std::vector<std::pair<double, double>> box;
            for (const auto& w : words) {
                const auto colon = w.find(':');
                if (colon == std::string::npos)
                    throw ParseError("sample_box entries look like lo:hi", line.number, 1);
                try {
                    box.emplace_back(std::stod(w.substr(0, colon)), std::stod(w.substr(colon + 1)));
                } catch (const std::exception&) {
                    throw ParseError("sample_box entries look like lo:hi", line.number, 1);
                }
            }
            c.set_sample_box(std::move(box));
        } else if (s[0] == 'g') {
            // g[i][j] = formula
            int i = -1, j = -1;
            std::size_t pos = 1;
            auto read_bracket = [&](int& out) {
                if (pos >= s.size() || s[pos] != '[')
                    throw ParseError("expected 'g[i][j] = formula'", line.number, static_cast<int>(pos) + 1);
                ++pos;
                std::size_t close = s.find(']', pos);
                if (close == std::string::npos)
                    throw ParseError("missing ']'", line.number, static_cast<int>(pos) + 1);
                try {
                    out = std::stoi(s.substr(pos, close - pos));
                } catch (const std::exception&) {
                    throw ParseError("metric index must be an integer", line.number,
                                     static_cast<int>(pos) + 1);
                }
                pos = close + 1;
            };
            read_bracket(i);
            read_bracket(j);
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos >= s.size() || s[pos] != '=')
                throw ParseError("expected '=' after g[i][j]", line.number, static_cast<int>(pos) + 1);
            ++pos;
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
            Chart& c = require_chart(line.number);
            if (i < 0 || i >= c.dim() || j < 0 || j >= c.dim())
                throw ParseError("metric index out of range", line.number, 2);
            if (j > i)
                throw ParseError("specify the lower triangle: need j <= i in g[i][j]", line.number, 2);
            c.set_component(i, j, s.substr(pos), line.number, static_cast<int>(pos));
        } else {
            throw ParseError("unrecognized directive '" + split_words(s)[0] + "'", line.number, 1);
        }
    }

    if (!chart) {
        if (dimension < 0) throw ParseError("chart file declares no 'dimension'", 1, 1);
        if (coords.empty()) throw ParseError("chart file declares no 'coordinates'", 1, 1);
        chart.emplace(name, coords);
    }
    return *chart;
}

Chart load_chart_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open chart file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    const auto slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem.erase(0, slash + 1);
    const auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem.erase(dot);
    return parse_chart_text(ss.str(), stem);
}

}  // namespace expr
}  // namespace gencond
