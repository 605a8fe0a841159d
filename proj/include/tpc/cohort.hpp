#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tpc {

enum class VariableKind { Continuous, BinaryStatic };

struct VariableSpec {
    std::string name;
    std::string domain_label;
    VariableKind kind = VariableKind::Continuous;
    int direction = +1; // +1: larger oriented value = more severe
    std::optional<std::string> source_locus; // set on one-hot genotype columns

    bool operator==(const VariableSpec &) const = default;
};

// Ordered variable registry with name lookup. Genotype rows in a varspec
// file are expanded into three one-hot binary columns before they reach
// this type, so a registry only ever holds continuous and binary variables.
class Registry {
  public:
    Registry() = default;
    explicit Registry(std::vector<VariableSpec> vars);

    std::size_t size() const { return vars_.size(); }
    const VariableSpec &at(std::size_t v) const { return vars_[v]; }
    const std::vector<VariableSpec> &vars() const { return vars_; }
    std::optional<std::size_t> index_of(const std::string &name) const;

    bool operator==(const Registry &other) const {
        return vars_ == other.vars_;
    }

  private:
    std::vector<VariableSpec> vars_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

// Longitudinal value array: N patients x V variables x M time points,
// stored row-major as [i][v][t]. The mask marks which cells were actually
// observed. The object is immutable once built.
struct LongitudinalCohort {
    std::vector<std::string> patient_ids;
    std::vector<std::string> time_labels; // index 0 = baseline
    Registry registry;
    std::vector<double> values;        // N*V*M
    std::vector<std::uint8_t> mask;    // N*V*M, 1 = observed

    std::size_t n() const { return patient_ids.size(); }
    std::size_t v() const { return registry.size(); }
    std::size_t m() const { return time_labels.size(); }

    std::size_t idx(std::size_t i, std::size_t var, std::size_t t) const {
        return (i * v() + var) * m() + t;
    }
    double value(std::size_t i, std::size_t var, std::size_t t) const {
        return values[idx(i, var, t)];
    }
    bool observed(std::size_t i, std::size_t var, std::size_t t) const {
        return mask[idx(i, var, t)] != 0;
    }
    bool complete() const;
};

struct CohortSplit {
    LongitudinalCohort train;
    LongitudinalCohort test;
    std::uint64_t seed = 0;
};

// Varspec CSV: header `variable,domain,kind,direction,source_locus`.
// kind `genotype` marks a raw allele-pair column that the loader expands.
struct VarspecEntry {
    std::string name;
    std::string domain;
    std::string kind; // continuous | binary_static | genotype
    int direction = +1;
    std::string source_locus;
};

std::vector<VarspecEntry> load_varspec(const std::string &path);
void save_varspec(const Registry &registry, const std::string &path);

// Data CSV: header `patient_id,time,variable,value`. Genotype variables
// carry allele-pair tokens ("CT"); everything else is numeric.
LongitudinalCohort load_cohort(const std::string &data_path,
                               const std::string &varspec_path);

// Same data format, but the registry is fixed in advance (e.g. taken from a
// trained model). Genotype tokens are matched against the registry's
// expanded one-hot columns.
LongitudinalCohort load_cohort(const std::string &data_path,
                               const Registry &registry);

void save_cohort(const LongitudinalCohort &cohort, const std::string &path);

LongitudinalCohort exclude_incomplete(const LongitudinalCohort &cohort);

CohortSplit split_train_test(const LongitudinalCohort &cohort,
                             double test_fraction, std::uint64_t seed);
CohortSplit split_train_test_count(const LongitudinalCohort &cohort,
                                   std::size_t test_count,
                                   std::uint64_t seed);

// Time-label order: "bl" (case-insensitive) first, then labels with an
// integer suffix in numeric order, then the rest lexicographically.
bool time_label_less(const std::string &a, const std::string &b);

} // namespace tpc
