#include "tpc/cohort.hpp"

#include "tpc/errors.hpp"
#include "tpc/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace tpc {

namespace {

std::string trim(const std::string &s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (std::isspace(static_cast<unsigned char>(s[b])) != 0))
        ++b;
    while (e > b && (std::isspace(static_cast<unsigned char>(s[e - 1])) != 0))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

double parse_double(const std::string &token, const std::string &path,
                    std::size_t line_no) {
    double out = 0.0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || token.empty())
        throw DataError(fmt::format("{}:{}: non-numeric value '{}'", path,
                                    line_no, token));
    return out;
}

std::vector<std::string> read_lines(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw DataError(fmt::format("cannot open file: {}", path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::string lower(std::string s) {
    for (char &c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Trailing integer run of a time label ("year2" -> 2, "10" -> 10).
std::optional<long> integer_suffix(const std::string &s) {
    std::size_t end = s.size();
    std::size_t begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(s[begin - 1])))
        --begin;
    if (begin == end) return std::nullopt;
    long value = 0;
    std::from_chars(s.data() + begin, s.data() + end, value);
    return value;
}

struct DataRow {
    std::string patient;
    std::string time;
    std::string variable;
    std::string value;
    std::size_t line_no;
};

std::vector<DataRow> read_data_rows(const std::string &path) {
    const auto lines = read_lines(path);
    if (lines.empty())
        throw DataError(fmt::format("{}: empty data file", path));
    if (split_csv(lines[0]) !=
        std::vector<std::string>{"patient_id", "time", "variable", "value"})
        throw DataError(fmt::format(
            "{}:1: expected header 'patient_id,time,variable,value'", path));
    std::vector<DataRow> rows;
    rows.reserve(lines.size());
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        auto fields = split_csv(lines[ln]);
        if (fields.size() != 4)
            throw DataError(fmt::format("{}:{}: expected 4 fields, got {}",
                                        path, ln + 1, fields.size()));
        rows.push_back({std::move(fields[0]), std::move(fields[1]),
                        std::move(fields[2]), std::move(fields[3]), ln + 1});
    }
    if (rows.empty())
        throw DataError(fmt::format("{}: no data rows", path));
    return rows;
}

// Normalized allele pair: exactly two letters, sorted ("TC" -> "CT").
std::string normalize_genotype(const std::string &token,
                               const std::string &path, std::size_t line_no) {
    if (token.size() != 2 ||
        std::isalpha(static_cast<unsigned char>(token[0])) == 0 ||
        std::isalpha(static_cast<unsigned char>(token[1])) == 0)
        throw DataError(fmt::format(
            "{}:{}: expected a two-letter allele pair, got '{}'", path,
            line_no, token));
    std::string norm{static_cast<char>(std::toupper(
                         static_cast<unsigned char>(token[0]))),
                     static_cast<char>(std::toupper(
                         static_cast<unsigned char>(token[1])))};
    if (norm[0] > norm[1]) std::swap(norm[0], norm[1]);
    return norm;
}

struct LocusColumns {
    std::vector<std::size_t> column_index;   // registry indices, one per category
    std::vector<std::string> category;       // sorted allele pairs
};

using LocusMap = std::map<std::string, LocusColumns>;

LongitudinalCohort assemble(const std::string &path,
                            const std::vector<DataRow> &rows,
                            Registry registry, const LocusMap &loci,
                            const std::map<std::string, std::string>
                                &genotype_variable_to_locus) {
    LongitudinalCohort cohort;
    cohort.registry = std::move(registry);

    std::map<std::string, std::size_t> patient_index;
    for (const auto &row : rows) {
        if (patient_index.emplace(row.patient, cohort.patient_ids.size())
                .second)
            cohort.patient_ids.push_back(row.patient);
    }

    std::set<std::string> time_set;
    for (const auto &row : rows) time_set.insert(row.time);
    cohort.time_labels.assign(time_set.begin(), time_set.end());
    std::sort(cohort.time_labels.begin(), cohort.time_labels.end(),
              time_label_less);
    std::map<std::string, std::size_t> time_index;
    for (std::size_t t = 0; t < cohort.time_labels.size(); ++t)
        time_index[cohort.time_labels[t]] = t;

    const std::size_t n = cohort.patient_ids.size();
    const std::size_t v = cohort.registry.size();
    const std::size_t m = cohort.time_labels.size();
    cohort.values.assign(n * v * m, 0.0);
    cohort.mask.assign(n * v * m, 0);

    // Duplicate detection is per logical variable: a genotype row and its
    // three expanded columns count as one cell.
    std::set<std::tuple<std::size_t, std::string, std::size_t>> seen;

    for (const auto &row : rows) {
        const std::size_t i = patient_index.at(row.patient);
        const std::size_t t = time_index.at(row.time);
        if (!seen.emplace(i, row.variable, t).second)
            throw DataError(fmt::format(
                "{}:{}: duplicate cell (patient '{}', variable '{}', time "
                "'{}')",
                path, row.line_no, row.patient, row.variable, row.time));

        auto locus_it = genotype_variable_to_locus.find(row.variable);
        if (locus_it != genotype_variable_to_locus.end()) {
            const LocusColumns &cols = loci.at(locus_it->second);
            const std::string norm =
                normalize_genotype(row.value, path, row.line_no);
            auto cat = std::find(cols.category.begin(), cols.category.end(),
                                 norm);
            if (cat == cols.category.end())
                throw DataError(fmt::format(
                    "{}:{}: genotype '{}' does not match any category of "
                    "locus '{}'",
                    path, row.line_no, norm, locus_it->second));
            for (std::size_t k = 0; k < cols.column_index.size(); ++k) {
                const std::size_t idx =
                    cohort.idx(i, cols.column_index[k], t);
                cohort.values[idx] =
                    (cols.category[k] == norm) ? 1.0 : 0.0;
                cohort.mask[idx] = 1;
            }
            continue;
        }

        const auto var = cohort.registry.index_of(row.variable);
        if (!var)
            throw DataError(
                fmt::format("{}:{}: unknown variable '{}'", path, row.line_no,
                            row.variable));
        const double value = parse_double(row.value, path, row.line_no);
        if (cohort.registry.at(*var).kind == VariableKind::BinaryStatic &&
            value != 0.0 && value != 1.0)
            throw DataError(fmt::format(
                "{}:{}: binary variable '{}' must be 0 or 1, got {}", path,
                row.line_no, row.variable, row.value));
        const std::size_t idx = cohort.idx(i, *var, t);
        cohort.values[idx] = value;
        cohort.mask[idx] = 1;
    }

    // Constancy check for binary variables, then replicate baseline-only
    // listings across the time axis.
    for (std::size_t var = 0; var < v; ++var) {
        if (cohort.registry.at(var).kind != VariableKind::BinaryStatic)
            continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (!cohort.observed(i, var, 0)) continue;
            const double base = cohort.value(i, var, 0);
            for (std::size_t t = 1; t < m; ++t) {
                const std::size_t idx = cohort.idx(i, var, t);
                if (cohort.mask[idx] != 0) {
                    if (cohort.values[idx] != base)
                        throw DataError(fmt::format(
                            "{}: binary variable '{}' changes over time for "
                            "patient '{}'",
                            path, cohort.registry.at(var).name,
                            cohort.patient_ids[i]));
                } else {
                    cohort.values[idx] = base;
                    cohort.mask[idx] = 1;
                }
            }
        }
    }

    // Continuous variables with no post-baseline measurement anywhere in the
    // file (e.g. age recorded once) are carried forward from baseline. A
    // variable that is measured yearly for anyone keeps its missing cells.
    for (std::size_t var = 0; var < v; ++var) {
        if (cohort.registry.at(var).kind != VariableKind::Continuous)
            continue;
        bool any_later = false;
        for (std::size_t i = 0; i < n && !any_later; ++i)
            for (std::size_t t = 1; t < m; ++t)
                if (cohort.observed(i, var, t)) {
                    any_later = true;
                    break;
                }
        if (any_later) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (!cohort.observed(i, var, 0)) continue;
            for (std::size_t t = 1; t < m; ++t) {
                const std::size_t idx = cohort.idx(i, var, t);
                cohort.values[idx] = cohort.value(i, var, 0);
                cohort.mask[idx] = 1;
            }
        }
    }

    return cohort;
}

LongitudinalCohort subset(const LongitudinalCohort &cohort,
                          const std::vector<std::size_t> &keep) {
    LongitudinalCohort out;
    out.time_labels = cohort.time_labels;
    out.registry = cohort.registry;
    out.patient_ids.reserve(keep.size());
    const std::size_t v = cohort.v();
    const std::size_t m = cohort.m();
    out.values.reserve(keep.size() * v * m);
    out.mask.reserve(keep.size() * v * m);
    for (std::size_t i : keep) {
        out.patient_ids.push_back(cohort.patient_ids[i]);
        const std::size_t begin = cohort.idx(i, 0, 0);
        out.values.insert(out.values.end(), cohort.values.begin() + begin,
                          cohort.values.begin() + begin + v * m);
        out.mask.insert(out.mask.end(), cohort.mask.begin() + begin,
                        cohort.mask.begin() + begin + v * m);
    }
    return out;
}

std::string format_value(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

} // namespace

Registry::Registry(std::vector<VariableSpec> vars) : vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const VariableSpec &spec = vars_[i];
        if (spec.direction != 1 && spec.direction != -1)
            throw DataError(fmt::format(
                "variable '{}': direction must be +1 or -1", spec.name));
        if (spec.kind == VariableKind::BinaryStatic && spec.direction != 1)
            throw DataError(fmt::format(
                "variable '{}': binary variables must have direction +1",
                spec.name));
        if (!by_name_.emplace(spec.name, i).second)
            throw DataError(
                fmt::format("duplicate variable name '{}'", spec.name));
    }
}

std::optional<std::size_t> Registry::index_of(const std::string &name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

bool LongitudinalCohort::complete() const {
    return std::all_of(mask.begin(), mask.end(),
                       [](std::uint8_t b) { return b != 0; });
}

bool time_label_less(const std::string &a, const std::string &b) {
    const bool a_bl = lower(a) == "bl";
    const bool b_bl = lower(b) == "bl";
    if (a_bl != b_bl) return a_bl;
    if (a_bl && b_bl) return false;
    const auto na = integer_suffix(a);
    const auto nb = integer_suffix(b);
    if (na.has_value() != nb.has_value()) return na.has_value();
    if (na && nb && *na != *nb) return *na < *nb;
    return a < b;
}

std::vector<VarspecEntry> load_varspec(const std::string &path) {
    const auto lines = read_lines(path);
    if (lines.empty())
        throw DataError(fmt::format("{}: empty varspec file", path));
    if (split_csv(lines[0]) !=
        std::vector<std::string>{"variable", "domain", "kind", "direction",
                                 "source_locus"})
        throw DataError(fmt::format(
            "{}:1: expected header 'variable,domain,kind,direction,"
            "source_locus'",
            path));
    std::vector<VarspecEntry> entries;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        auto fields = split_csv(lines[ln]);
        if (fields.size() != 5)
            throw DataError(fmt::format("{}:{}: expected 5 fields, got {}",
                                        path, ln + 1, fields.size()));
        VarspecEntry entry;
        entry.name = fields[0];
        entry.domain = fields[1];
        entry.kind = fields[2];
        entry.source_locus = fields[4];
        if (entry.name.empty())
            throw DataError(
                fmt::format("{}:{}: empty variable name", path, ln + 1));
        if (entry.kind != "continuous" && entry.kind != "binary_static" &&
            entry.kind != "genotype")
            throw DataError(fmt::format(
                "{}:{}: kind must be continuous, binary_static or genotype, "
                "got '{}'",
                path, ln + 1, entry.kind));
        if (fields[3] == "+1" || fields[3] == "1")
            entry.direction = +1;
        else if (fields[3] == "-1")
            entry.direction = -1;
        else
            throw DataError(
                fmt::format("{}:{}: direction must be +1 or -1, got '{}'",
                            path, ln + 1, fields[3]));
        entries.push_back(std::move(entry));
    }
    if (entries.empty())
        throw DataError(fmt::format("{}: no variables declared", path));
    return entries;
}

void save_varspec(const Registry &registry, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write file: {}", path));
    out << "variable,domain,kind,direction,source_locus\n";
    for (const VariableSpec &spec : registry.vars()) {
        out << spec.name << ',' << spec.domain_label << ','
            << (spec.kind == VariableKind::Continuous ? "continuous"
                                                      : "binary_static")
            << ',' << (spec.direction > 0 ? "+1" : "-1") << ','
            << spec.source_locus.value_or("") << '\n';
    }
}

LongitudinalCohort load_cohort(const std::string &data_path,
                               const std::string &varspec_path) {
    const auto entries = load_varspec(varspec_path);
    const auto rows = read_data_rows(data_path);

    // Genotype categories come from the observed allele pairs, so loci are
    // scanned before the registry is expanded.
    std::map<std::string, std::set<std::string>> locus_tokens;
    std::map<std::string, std::string> genotype_vars;
    for (const auto &entry : entries)
        if (entry.kind == "genotype") genotype_vars[entry.name] = entry.name;
    for (const auto &row : rows) {
        auto it = genotype_vars.find(row.variable);
        if (it != genotype_vars.end())
            locus_tokens[it->second].insert(
                normalize_genotype(row.value, data_path, row.line_no));
    }

    std::vector<VariableSpec> vars;
    LocusMap loci;
    for (const auto &entry : entries) {
        if (entry.kind != "genotype") {
            VariableSpec spec;
            spec.name = entry.name;
            spec.domain_label = entry.domain;
            spec.kind = entry.kind == "continuous"
                            ? VariableKind::Continuous
                            : VariableKind::BinaryStatic;
            spec.direction = entry.direction;
            if (!entry.source_locus.empty())
                spec.source_locus = entry.source_locus;
            vars.push_back(std::move(spec));
            continue;
        }
        const auto &tokens = locus_tokens[entry.name];
        std::set<char> alleles;
        for (const auto &tok : tokens) {
            alleles.insert(tok[0]);
            alleles.insert(tok[1]);
        }
        if (alleles.size() != 2)
            throw DataError(fmt::format(
                "{}: locus '{}' must show exactly 2 distinct alleles, found "
                "{}",
                data_path, entry.name, alleles.size()));
        const char a = *alleles.begin();
        const char b = *std::next(alleles.begin());
        LocusColumns cols;
        for (const std::string cat :
             {std::string{a, a}, std::string{a, b}, std::string{b, b}}) {
            VariableSpec spec;
            spec.name = entry.name + "-" + cat;
            spec.domain_label = entry.domain;
            spec.kind = VariableKind::BinaryStatic;
            spec.direction = +1;
            spec.source_locus = entry.name;
            cols.column_index.push_back(vars.size());
            cols.category.push_back(cat);
            vars.push_back(std::move(spec));
        }
        loci[entry.name] = std::move(cols);
    }

    return assemble(data_path, rows, Registry(std::move(vars)), loci,
                    genotype_vars);
}

LongitudinalCohort load_cohort(const std::string &data_path,
                               const Registry &registry) {
    const auto rows = read_data_rows(data_path);
    LocusMap loci;
    for (std::size_t i = 0; i < registry.size(); ++i) {
        const VariableSpec &spec = registry.at(i);
        if (!spec.source_locus) continue;
        const std::string prefix = *spec.source_locus + "-";
        if (spec.name.size() <= prefix.size() ||
            spec.name.compare(0, prefix.size(), prefix) != 0)
            continue;
        LocusColumns &cols = loci[*spec.source_locus];
        cols.column_index.push_back(i);
        cols.category.push_back(spec.name.substr(prefix.size()));
    }
    std::map<std::string, std::string> genotype_vars;
    for (const auto &[locus, cols] : loci)
        if (cols.column_index.size() == 3) genotype_vars[locus] = locus;
    return assemble(data_path, rows, registry, loci, genotype_vars);
}

void save_cohort(const LongitudinalCohort &cohort, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw DataError(fmt::format("cannot write file: {}", path));
    out << "patient_id,time,variable,value\n";
    for (std::size_t i = 0; i < cohort.n(); ++i)
        for (std::size_t var = 0; var < cohort.v(); ++var)
            for (std::size_t t = 0; t < cohort.m(); ++t)
                if (cohort.observed(i, var, t))
                    out << cohort.patient_ids[i] << ','
                        << cohort.time_labels[t] << ','
                        << cohort.registry.at(var).name << ','
                        << format_value(cohort.value(i, var, t)) << '\n';
}

LongitudinalCohort exclude_incomplete(const LongitudinalCohort &cohort) {
    std::vector<std::size_t> keep;
    const std::size_t stride = cohort.v() * cohort.m();
    for (std::size_t i = 0; i < cohort.n(); ++i) {
        const auto begin = cohort.mask.begin() +
                           static_cast<std::ptrdiff_t>(i * stride);
        if (std::all_of(begin, begin + static_cast<std::ptrdiff_t>(stride),
                        [](std::uint8_t b) { return b != 0; }))
            keep.push_back(i);
    }
    if (keep.empty())
        throw DataError("no complete patients remain after exclusion");
    return subset(cohort, keep);
}

CohortSplit split_train_test(const LongitudinalCohort &cohort,
                             double test_fraction, std::uint64_t seed) {
    if (!(test_fraction >= 0.0) || test_fraction >= 1.0)
        throw ConfigError(fmt::format(
            "test fraction must lie in [0, 1), got {}", test_fraction));
    const auto test_count = static_cast<std::size_t>(
        std::floor(static_cast<double>(cohort.n()) * test_fraction + 0.5));
    return split_train_test_count(cohort, test_count, seed);
}

CohortSplit split_train_test_count(const LongitudinalCohort &cohort,
                                   std::size_t test_count,
                                   std::uint64_t seed) {
    if (test_count >= cohort.n())
        throw ConfigError(fmt::format(
            "test count {} leaves no training patients (N={})", test_count,
            cohort.n()));
    std::vector<std::size_t> order(cohort.n());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 1));
    rng.shuffle(order);
    std::vector<std::size_t> test_idx(order.begin(),
                                      order.begin() +
                                          static_cast<std::ptrdiff_t>(
                                              test_count));
    std::vector<std::size_t> train_idx(order.begin() +
                                           static_cast<std::ptrdiff_t>(
                                               test_count),
                                       order.end());
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    CohortSplit split;
    split.train = subset(cohort, train_idx);
    split.test = subset(cohort, test_idx);
    split.seed = seed;
    return split;
}

} // namespace tpc
