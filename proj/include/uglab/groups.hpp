// Finite subgroups of U(d) as first-class objects. Structured families keep
// O(d) element handles (signed permutations, sign vectors, root-of-unity
// exponent vectors); arbitrary groups are enumerated from generators by a
// tolerance-based closure.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uglab/matcore.hpp"
#include "uglab/rational.hpp"
#include "uglab/rng.hpp"

namespace uglab::groups {

struct Permutation {
    std::vector<int> map;  // i -> map[i], a bijection of {0..d-1}

    int size() const { return static_cast<int>(map.size()); }
    static Permutation identity(int d);
    bool is_valid() const;
};

// u = sum_i signs[i] e_{i, perm(i)}
struct SignedPerm {
    Permutation perm;
    std::vector<std::int8_t> signs;  // entries +-1
};

struct SignVector {
    std::vector<std::int8_t> signs;
};

struct RootVector {
    int order = 1;          // n: entries are n-th roots of unity
    std::vector<int> exps;  // exponents in [0, n)
};

struct EnumIndex {
    std::size_t index = 0;
};

using Element = std::variant<SignedPerm, Permutation, SignVector, RootVector, EnumIndex>;

struct HyperOct { int d; };
struct SymmetricAsUnitary { int d; };
struct DiagSign { int d; };
struct DiagRoots { int d; int n; };

class EnumeratedGroupData;

struct Enumerated {
    std::shared_ptr<const EnumeratedGroupData> data;
};

using GroupSpec = std::variant<HyperOct, SymmetricAsUnitary, DiagSign, DiagRoots, Enumerated>;

int dimension(const GroupSpec& spec);
BigInt group_order(const GroupSpec& spec);
std::string spec_name(const GroupSpec& spec);

Element identity_element(const GroupSpec& spec);
matcore::UnitaryMatrix element_matrix(const GroupSpec& spec, const Element& g);

// Trace of the element's matrix, computed in O(d) for structured specs.
std::complex<double> character(const GroupSpec& spec, const Element& g);

Element compose(const GroupSpec& spec, const Element& g, const Element& h);
Element inverse(const GroupSpec& spec, const Element& g);
bool elements_equal(const GroupSpec& spec, const Element& g, const Element& h);

// Canonical string key; lexicographic order on keys fixes every tie-break.
std::string element_key(const GroupSpec& spec, const Element& g);

// Exactly uniform draw.
Element sample_uniform(const GroupSpec& spec, SeededRng& rng);

// All elements in canonical order. Throws DomainError when the order exceeds cap.
std::vector<Element> enumerate_elements(const GroupSpec& spec, std::size_t cap);

// Test (1/|G|) sum |chi(g)|^2 = 1; exact for structured specs, tolerance 1e-8
// for enumerated ones.
bool is_irreducible(const GroupSpec& spec);

// Immutable storage for a closed enumerated group, with tolerance lookup.
class EnumeratedGroupData {
  public:
    EnumeratedGroupData(std::vector<matcore::CMatrix> elems, double tol, int dim);

    int dim() const { return dim_; }
    double tol() const { return tol_; }
    std::size_t size() const { return elems_.size(); }
    const matcore::CMatrix& element(std::size_t i) const { return elems_[i]; }
    const std::vector<matcore::CMatrix>& elements() const { return elems_; }
    double closure_defect() const { return defect_; }
    std::size_t identity_index() const { return identity_; }

    // Index of the stored element within tol of m, if any. Throws
    // PrecisionError when the nearest element is in the ambiguity band
    // [tol, 2 tol).
    std::optional<std::size_t> find(const matcore::CMatrix& m) const;

    std::size_t product_index(std::size_t i, std::size_t j) const;
    std::size_t inverse_index(std::size_t i) const;

  private:
    friend struct ClosureBuilder;
    void index_element(std::size_t i);
    void finalize();

    int dim_ = 0;
    double tol_ = 0.0;
    double defect_ = 0.0;
    std::size_t identity_ = 0;
    std::vector<matcore::CMatrix> elems_;
    std::vector<std::size_t> inverse_;
    std::vector<std::uint32_t> mult_table_;  // built when size is small
    std::size_t table_n_ = 0;
    // quantized-entry hash (cell tol/4d) and trace buckets (cell d*tol)
    struct Buckets;
    std::shared_ptr<Buckets> buckets_;
    bool building_ = true;  // defect accumulation stops once finalized
    mutable double max_matched_dist_ = 0.0;
};

struct EnumeratedGroup {
    Enumerated spec;
    std::size_t order = 0;
    double closure_defect = 0.0;
};

// BFS closure of the generated group, identifying matrices at delta_inf < tol.
// Throws ClosureCapError (carrying the partial count) when cap is exceeded and
// PrecisionError on tolerance ambiguity.
EnumeratedGroup enumerate_closure(const std::vector<matcore::CMatrix>& generators, double tol,
                                  std::size_t cap);

// Materializes a structured spec's elements into an enumerated group
// (canonical element order preserved).
EnumeratedGroup materialize_group(const GroupSpec& spec, std::size_t cap);

struct AbelianIndexResult {
    BigInt index;                      // |G| / |Gamma| for the found abelian Gamma
    std::vector<std::size_t> witness;  // element indices of Gamma
    bool exact = false;                // true: minimal index over all abelian subgroups
    bool witness_normal = false;       // conjugation-closure test of the witness
};

// Exhaustive over subgroups generated by commuting subsets when
// |G| <= exhaustive_cap; greedy commuting-extension upper bound otherwise.
AbelianIndexResult abelian_index_upper(const EnumeratedGroup& group,
                                       std::size_t exhaustive_cap = 200);

// Generator file: {"d": int, "tol": float, "generators": [[[re,im], ...], ...]}
// with each generator a row-major list of d*d [re, im] pairs.
struct GeneratorFile {
    int d = 0;
    double tol = 1e-8;
    std::vector<matcore::CMatrix> generators;
};
GeneratorFile load_generators(const std::string& path);
matcore::CMatrix parse_matrix_json(const std::string& path);  // {"d":..,"matrix":[...]}

// "hyperoct:8", "sym:4", "diag-sign:16", "diag-roots:2:4", "q8", "enum:FILE".
GroupSpec parse_group_spec(const std::string& text, std::size_t closure_cap = 50000);

}  // namespace uglab::groups
