#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pbed/operators.hpp"

namespace pbed {

/// Candidate-function pools per process family. The standard catalog mirrors
/// the benchmark configuration: power and reciprocal-power functions up to
/// order 3 for breakage and growth, power and product functions up to total
/// degree 3 for aggregation, 41 columns in total.
struct BasisCatalog {
    std::vector<BasisFunction> agg;        // shared by agg birth and death
    std::vector<BasisFunction> bkg_birth;  // functions of y
    std::vector<BasisFunction> bkg_death;  // functions of x
    std::vector<BasisFunction> growth;     // functions of x

    static BasisCatalog standard();

    std::size_t agg_columns() const { return 2 * agg.size(); }
    std::size_t bkg_columns() const { return bkg_birth.size() + bkg_death.size(); }
    std::size_t growth_columns() const { return growth.size(); }
    std::size_t total_columns() const {
        return agg_columns() + bkg_columns() + growth_columns();
    }
};

/// Identity of a library column: which operator, which candidate function.
struct ColumnDescriptor {
    Process process;
    BasisFunction basis;

    std::string name() const {
        return std::string(operator_label(process)) + "(" + basis.name() + ")";
    }
    bool operator==(const ColumnDescriptor& o) const {
        return process == o.process && basis == o.basis;
    }
};

/// A recorded "primary OR scale x alternate" relation: the retained column
/// approximately equals scale times the eliminated column.
struct Equivalence {
    ColumnDescriptor alternate;
    double scale;
};

/// Interpretability ledger: one entry per retained column, carrying its
/// descriptor and any OR equivalences absorbed during curation.
struct SymbolicEntry {
    ColumnDescriptor primary;
    std::vector<Equivalence> equivalences;
};
using SymbolicVector = std::vector<SymbolicEntry>;

/// A detected linear dependence among library columns: the raw-scale null
/// vector annihilates the member columns within the curation tolerance.
struct DependencyGroup {
    std::vector<std::size_t> members;   // indices into the uncurated library
    Eigen::VectorXd null_vector;        // aligned with members, max-abs normalized
    std::vector<std::size_t> weak;      // |coef| < 0.1 * max|coef|
    std::vector<std::size_t> strong;
    std::size_t removed;                // the member eliminated for this group
};

/// An evaluated candidate library: the matrix view plus per-column identity.
class Library {
public:
    Library() = default;
    Library(Eigen::MatrixXd omega, std::vector<ColumnDescriptor> descriptors,
            std::string combination, bool curated = false);

    const Eigen::MatrixXd& matrix() const { return omega_; }
    const std::vector<ColumnDescriptor>& descriptors() const { return desc_; }
    const std::string& combination() const { return comb_; }
    bool curated() const { return curated_; }

    std::size_t rows() const { return static_cast<std::size_t>(omega_.rows()); }
    std::size_t size() const { return desc_.size(); }

private:
    Eigen::MatrixXd omega_;
    std::vector<ColumnDescriptor> desc_;
    std::string comb_;
    bool curated_ = false;
};

/// Evaluate all columns of one process family over a field, birth block
/// before death block, catalog order within a block.
std::vector<CandidateColumn> build_sublibrary(const DensityField& field, Family family,
                                              const BasisCatalog& catalog);

/// Concatenate sub-libraries column-wise into a master library.
Library assemble_master(std::vector<std::vector<CandidateColumn>> sublibs,
                        std::string combination);

struct CurationResult {
    Library curated;
    SymbolicVector symbols;
    std::vector<DependencyGroup> groups;
    std::vector<std::size_t> degenerate;  // zero columns, removed outright
};

/// Default curation tolerance: residual threshold for unit-normalized columns.
inline constexpr double kDefaultRankTolerance = 1e-8;

/// Detect linearly dependent column groups, remove one strongly correlated
/// member per group (lowest-indexed strong member; the highest-indexed strong
/// member is always kept), and record the OR equivalences so the eliminated
/// terms stay available for interpretation.
CurationResult eliminate_dependent_columns(const Library& lib,
                                           double tolerance = kDefaultRankTolerance);

}  // namespace pbed
