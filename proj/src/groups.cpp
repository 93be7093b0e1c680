#include "uglab/groups.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "uglab/error.hpp"
#include "uglab/exactcomb.hpp"

namespace uglab::groups {

using matcore::CMatrix;
using matcore::cplx;

Permutation Permutation::identity(int d) {
    Permutation p;
    p.map.resize(d);
    for (int i = 0; i < d; ++i) p.map[i] = i;
    return p;
}

bool Permutation::is_valid() const {
    std::vector<bool> seen(map.size(), false);
    for (int v : map) {
        if (v < 0 || v >= size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

namespace {

Permutation compose_perm(const Permutation& g, const Permutation& h) {
    // matrix(g)*matrix(h) corresponds to i -> h(g(i))
    Permutation r;
    r.map.resize(g.map.size());
    for (int i = 0; i < g.size(); ++i) r.map[i] = h.map[g.map[i]];
    return r;
}

Permutation inverse_perm(const Permutation& g) {
    Permutation r;
    r.map.resize(g.map.size());
    for (int i = 0; i < g.size(); ++i) r.map[g.map[i]] = i;
    return r;
}

Permutation random_perm(int d, SeededRng& rng) {
    Permutation p = Permutation::identity(d);
    for (int i = d - 1; i >= 1; --i) {
        const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(p.map[i], p.map[j]);
    }
    return p;
}

[[noreturn]] void bad_handle() { throw DomainError("invalid element handle for group spec"); }

}  // namespace

int dimension(const GroupSpec& spec) {
    if (const auto* h = std::get_if<HyperOct>(&spec)) return h->d;
    if (const auto* s = std::get_if<SymmetricAsUnitary>(&spec)) return s->d;
    if (const auto* s = std::get_if<DiagSign>(&spec)) return s->d;
    if (const auto* r = std::get_if<DiagRoots>(&spec)) return r->d;
    return static_cast<int>(std::get<Enumerated>(spec).data->dim());
}

BigInt group_order(const GroupSpec& spec) {
    if (const auto* h = std::get_if<HyperOct>(&spec))
        return pow2(static_cast<unsigned long>(h->d)) *
               factorial(static_cast<unsigned long>(h->d));
    if (const auto* s = std::get_if<SymmetricAsUnitary>(&spec))
        return factorial(static_cast<unsigned long>(s->d));
    if (const auto* s = std::get_if<DiagSign>(&spec))
        return pow2(static_cast<unsigned long>(s->d));
    if (const auto* r = std::get_if<DiagRoots>(&spec)) {
        BigInt v;
        mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(r->n),
                      static_cast<unsigned long>(r->d));
        return v;
    }
    return BigInt(static_cast<unsigned long>(std::get<Enumerated>(spec).data->size()));
}

std::string spec_name(const GroupSpec& spec) {
    std::ostringstream os;
    if (const auto* h = std::get_if<HyperOct>(&spec))
        os << "hyperoct:" << h->d;
    else if (const auto* s = std::get_if<SymmetricAsUnitary>(&spec))
        os << "sym:" << s->d;
    else if (const auto* s = std::get_if<DiagSign>(&spec))
        os << "diag-sign:" << s->d;
    else if (const auto* r = std::get_if<DiagRoots>(&spec))
        os << "diag-roots:" << r->d << ":" << r->n;
    else {
        const auto& e = std::get<Enumerated>(spec);
        os << "enum[d=" << e.data->dim() << ",order=" << e.data->size() << "]";
    }
    return os.str();
}

Element identity_element(const GroupSpec& spec) {
    if (const auto* h = std::get_if<HyperOct>(&spec))
        return SignedPerm{Permutation::identity(h->d),
                          std::vector<std::int8_t>(static_cast<std::size_t>(h->d), 1)};
    if (const auto* s = std::get_if<SymmetricAsUnitary>(&spec))
        return Permutation::identity(s->d);
    if (const auto* s = std::get_if<DiagSign>(&spec))
        return SignVector{std::vector<std::int8_t>(static_cast<std::size_t>(s->d), 1)};
    if (const auto* r = std::get_if<DiagRoots>(&spec))
        return RootVector{r->n, std::vector<int>(static_cast<std::size_t>(r->d), 0)};
    return EnumIndex{std::get<Enumerated>(spec).data->identity_index()};
}

matcore::UnitaryMatrix element_matrix(const GroupSpec& spec, const Element& g) {
    const int d = dimension(spec);
    if (const auto* h = std::get_if<HyperOct>(&spec)) {
        const auto* e = std::get_if<SignedPerm>(&g);
        if (!e || e->perm.size() != h->d || e->signs.size() != static_cast<std::size_t>(h->d))
            bad_handle();
        CMatrix m(d);
        for (int i = 0; i < d; ++i) m(i, e->perm.map[i]) = static_cast<double>(e->signs[i]);
        return matcore::UnitaryMatrix(std::move(m));
    }
    if (std::get_if<SymmetricAsUnitary>(&spec)) {
        const auto* e = std::get_if<Permutation>(&g);
        if (!e || e->size() != d) bad_handle();
        CMatrix m(d);
        for (int i = 0; i < d; ++i) m(i, e->map[i]) = 1.0;
        return matcore::UnitaryMatrix(std::move(m));
    }
    if (std::get_if<DiagSign>(&spec)) {
        const auto* e = std::get_if<SignVector>(&g);
        if (!e || e->signs.size() != static_cast<std::size_t>(d)) bad_handle();
        CMatrix m(d);
        for (int i = 0; i < d; ++i) m(i, i) = static_cast<double>(e->signs[i]);
        return matcore::UnitaryMatrix(std::move(m));
    }
    if (const auto* r = std::get_if<DiagRoots>(&spec)) {
        const auto* e = std::get_if<RootVector>(&g);
        if (!e || e->order != r->n || e->exps.size() != static_cast<std::size_t>(d)) bad_handle();
        CMatrix m(d);
        for (int i = 0; i < d; ++i) {
            const double a = 2.0 * M_PI * e->exps[i] / r->n;
            m(i, i) = cplx(std::cos(a), std::sin(a));
        }
        return matcore::UnitaryMatrix(std::move(m));
    }
    const auto& en = std::get<Enumerated>(spec);
    const auto* e = std::get_if<EnumIndex>(&g);
    if (!e || e->index >= en.data->size()) bad_handle();
    return matcore::UnitaryMatrix(en.data->element(e->index));
}

std::complex<double> character(const GroupSpec& spec, const Element& g) {
    if (const auto* h = std::get_if<HyperOct>(&spec)) {
        const auto* e = std::get_if<SignedPerm>(&g);
        if (!e || e->perm.size() != h->d) bad_handle();
        long s = 0;
        for (int i = 0; i < h->d; ++i)
            if (e->perm.map[i] == i) s += e->signs[i];
        return {static_cast<double>(s), 0.0};
    }
    if (const auto* sy = std::get_if<SymmetricAsUnitary>(&spec)) {
        const auto* e = std::get_if<Permutation>(&g);
        if (!e || e->size() != sy->d) bad_handle();
        long s = 0;
        for (int i = 0; i < sy->d; ++i)
            if (e->map[i] == i) ++s;
        return {static_cast<double>(s), 0.0};
    }
    if (const auto* ds = std::get_if<DiagSign>(&spec)) {
        const auto* e = std::get_if<SignVector>(&g);
        if (!e || e->signs.size() != static_cast<std::size_t>(ds->d)) bad_handle();
        long s = 0;
        for (auto v : e->signs) s += v;
        return {static_cast<double>(s), 0.0};
    }
    if (const auto* r = std::get_if<DiagRoots>(&spec)) {
        const auto* e = std::get_if<RootVector>(&g);
        if (!e || e->order != r->n) bad_handle();
        cplx s = 0.0;
        for (int ex : e->exps) {
            const double a = 2.0 * M_PI * ex / r->n;
            s += cplx(std::cos(a), std::sin(a));
        }
        return s;
    }
    const auto& en = std::get<Enumerated>(spec);
    const auto* e = std::get_if<EnumIndex>(&g);
    if (!e || e->index >= en.data->size()) bad_handle();
    return matcore::trace(en.data->element(e->index));
}

Element compose(const GroupSpec& spec, const Element& g, const Element& h) {
    if (std::get_if<HyperOct>(&spec)) {
        const auto* a = std::get_if<SignedPerm>(&g);
        const auto* b = std::get_if<SignedPerm>(&h);
        if (!a || !b) bad_handle();
        SignedPerm r;
        r.perm = compose_perm(a->perm, b->perm);
        r.signs.resize(a->signs.size());
        // sign transport: (sigma,eps)(sigma',eps') has eps_i * eps'_{sigma(i)}
        for (int i = 0; i < a->perm.size(); ++i)
            r.signs[i] =
                static_cast<std::int8_t>(a->signs[i] * b->signs[a->perm.map[i]]);
        return r;
    }
    if (std::get_if<SymmetricAsUnitary>(&spec)) {
        const auto* a = std::get_if<Permutation>(&g);
        const auto* b = std::get_if<Permutation>(&h);
        if (!a || !b) bad_handle();
        return compose_perm(*a, *b);
    }
    if (std::get_if<DiagSign>(&spec)) {
        const auto* a = std::get_if<SignVector>(&g);
        const auto* b = std::get_if<SignVector>(&h);
        if (!a || !b || a->signs.size() != b->signs.size()) bad_handle();
        SignVector r = *a;
        for (std::size_t i = 0; i < r.signs.size(); ++i)
            r.signs[i] = static_cast<std::int8_t>(r.signs[i] * b->signs[i]);
        return r;
    }
    if (std::get_if<DiagRoots>(&spec)) {
        const auto* a = std::get_if<RootVector>(&g);
        const auto* b = std::get_if<RootVector>(&h);
        if (!a || !b || a->order != b->order || a->exps.size() != b->exps.size()) bad_handle();
        RootVector r = *a;
        for (std::size_t i = 0; i < r.exps.size(); ++i)
            r.exps[i] = (r.exps[i] + b->exps[i]) % r.order;
        return r;
    }
    const auto& en = std::get<Enumerated>(spec);
    const auto* a = std::get_if<EnumIndex>(&g);
    const auto* b = std::get_if<EnumIndex>(&h);
    if (!a || !b) bad_handle();
    return EnumIndex{en.data->product_index(a->index, b->index)};
}

Element inverse(const GroupSpec& spec, const Element& g) {
    if (std::get_if<HyperOct>(&spec)) {
        const auto* a = std::get_if<SignedPerm>(&g);
        if (!a) bad_handle();
        SignedPerm r;
        r.perm = inverse_perm(a->perm);
        r.signs.resize(a->signs.size());
        for (int j = 0; j < a->perm.size(); ++j) r.signs[j] = a->signs[r.perm.map[j]];
        return r;
    }
    if (std::get_if<SymmetricAsUnitary>(&spec)) {
        const auto* a = std::get_if<Permutation>(&g);
        if (!a) bad_handle();
        return inverse_perm(*a);
    }
    if (std::get_if<DiagSign>(&spec)) {
        const auto* a = std::get_if<SignVector>(&g);
        if (!a) bad_handle();
        return *a;  // signs are involutions
    }
    if (std::get_if<DiagRoots>(&spec)) {
        const auto* a = std::get_if<RootVector>(&g);
        if (!a) bad_handle();
        RootVector r = *a;
        for (auto& e : r.exps) e = (r.order - e) % r.order;
        return r;
    }
    const auto& en = std::get<Enumerated>(spec);
    const auto* a = std::get_if<EnumIndex>(&g);
    if (!a) bad_handle();
    return EnumIndex{en.data->inverse_index(a->index)};
}

bool elements_equal(const GroupSpec& spec, const Element& g, const Element& h) {
    return element_key(spec, g) == element_key(spec, h);
}

std::string element_key(const GroupSpec& spec, const Element& g) {
    std::ostringstream os;
    (void)spec;
    if (const auto* e = std::get_if<SignedPerm>(&g)) {
        os << "sp:";
        for (int v : e->perm.map) os << v << ',';
        os << ';';
        for (int v : e->signs) os << (v > 0 ? '+' : '-');
    } else if (const auto* e2 = std::get_if<Permutation>(&g)) {
        os << "p:";
        for (int v : e2->map) os << v << ',';
    } else if (const auto* e3 = std::get_if<SignVector>(&g)) {
        os << "s:";
        for (int v : e3->signs) os << (v > 0 ? '+' : '-');
    } else if (const auto* e4 = std::get_if<RootVector>(&g)) {
        os << "r" << e4->order << ":";
        for (int v : e4->exps) os << v << ',';
    } else {
        os << "e:" << std::get<EnumIndex>(g).index;
    }
    return os.str();
}

Element sample_uniform(const GroupSpec& spec, SeededRng& rng) {
    if (const auto* h = std::get_if<HyperOct>(&spec)) {
        SignedPerm e;
        e.perm = random_perm(h->d, rng);
        e.signs.resize(static_cast<std::size_t>(h->d));
        for (auto& s : e.signs) s = (rng.next_u64() & 1ULL) ? std::int8_t(1) : std::int8_t(-1);
        return e;
    }
    if (const auto* s = std::get_if<SymmetricAsUnitary>(&spec)) return random_perm(s->d, rng);
    if (const auto* ds = std::get_if<DiagSign>(&spec)) {
        SignVector e;
        e.signs.resize(static_cast<std::size_t>(ds->d));
        for (auto& v : e.signs) v = (rng.next_u64() & 1ULL) ? std::int8_t(1) : std::int8_t(-1);
        return e;
    }
    if (const auto* r = std::get_if<DiagRoots>(&spec)) {
        RootVector e;
        e.order = r->n;
        e.exps.resize(static_cast<std::size_t>(r->d));
        for (auto& v : e.exps)
            v = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(r->n)));
        return e;
    }
    const auto& en = std::get<Enumerated>(spec);
    return EnumIndex{rng.uniform_index(en.data->size())};
}

std::vector<Element> enumerate_elements(const GroupSpec& spec, std::size_t cap) {
    if (group_order(spec) > BigInt(static_cast<unsigned long>(cap)))
        throw DomainError("enumerate_elements: group order exceeds cap");
    std::vector<Element> out;
    if (const auto* h = std::get_if<HyperOct>(&spec)) {
        const int d = h->d;
        Permutation p = Permutation::identity(d);
        do {
            for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
                SignedPerm e;
                e.perm = p;
                e.signs.resize(static_cast<std::size_t>(d));
                for (int i = 0; i < d; ++i)
                    e.signs[i] = (mask >> i) & 1ULL ? std::int8_t(-1) : std::int8_t(1);
                out.emplace_back(std::move(e));
            }
        } while (std::next_permutation(p.map.begin(), p.map.end()));
        return out;
    }
    if (const auto* s = std::get_if<SymmetricAsUnitary>(&spec)) {
        Permutation p = Permutation::identity(s->d);
        do {
            out.emplace_back(p);
        } while (std::next_permutation(p.map.begin(), p.map.end()));
        return out;
    }
    if (const auto* ds = std::get_if<DiagSign>(&spec)) {
        const int d = ds->d;
        for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
            SignVector e;
            e.signs.resize(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i)
                e.signs[i] = (mask >> i) & 1ULL ? std::int8_t(-1) : std::int8_t(1);
            out.emplace_back(std::move(e));
        }
        return out;
    }
    if (const auto* r = std::get_if<DiagRoots>(&spec)) {
        RootVector e;
        e.order = r->n;
        e.exps.assign(static_cast<std::size_t>(r->d), 0);
        while (true) {
            out.emplace_back(e);
            int i = r->d - 1;
            while (i >= 0 && ++e.exps[i] == r->n) e.exps[i--] = 0;
            if (i < 0) break;
        }
        return out;
    }
    const auto& en = std::get<Enumerated>(spec);
    for (std::size_t i = 0; i < en.data->size(); ++i) out.push_back(EnumIndex{i});
    return out;
}

bool is_irreducible(const GroupSpec& spec) {
    // mean of |chi|^2 over the group equals 1 exactly.
    if (const auto* h = std::get_if<HyperOct>(&spec)) {
        // E chi^2 = sum_j X_j * j / d!  (signs cancel cross terms)
        BigInt s = 0;
        for (long j = 0; j <= h->d; ++j) s += exactcomb::fixed_point_count(h->d, j) * BigInt(j);
        return s == factorial(static_cast<unsigned long>(h->d));
    }
    if (const auto* sy = std::get_if<SymmetricAsUnitary>(&spec)) {
        BigInt s = 0;
        for (long j = 0; j <= sy->d; ++j)
            s += exactcomb::fixed_point_count(sy->d, j) * BigInt(j) * BigInt(j);
        return s == factorial(static_cast<unsigned long>(sy->d));
    }
    if (const auto* ds = std::get_if<DiagSign>(&spec)) return ds->d == 1;
    if (const auto* r = std::get_if<DiagRoots>(&spec)) {
        // E|chi|^2 = d for n >= 2 and d^2 for n = 1; equal to 1 iff d = 1.
        return r->d == 1;
    }
    const auto& en = std::get<Enumerated>(spec);
    double s = 0.0;
    for (const auto& m : en.data->elements()) s += std::norm(matcore::trace(m));
    return std::abs(s / static_cast<double>(en.data->size()) - 1.0) <= 1e-8;
}

// ---------------------------------------------------------------------------
// Enumerated groups: tolerance lookup and BFS closure.

struct EnumeratedGroupData::Buckets {
    double cell = 0.0;        // quantized-entry cell: tol/(4d)
    double trace_cell = 0.0;  // trace bucket cell: d*tol
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_entries;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_trace;

    static std::uint64_t fnv(std::uint64_t h, long long v) {
        for (int b = 0; b < 8; ++b) {
            h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::uint64_t entry_key(const CMatrix& m) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const cplx& v : m.data()) {
            h = fnv(h, std::llround(v.real() / cell));
            h = fnv(h, std::llround(v.imag() / cell));
        }
        return h;
    }

    std::uint64_t trace_key(cplx t, long long di, long long dj) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        h = fnv(h, std::llround(t.real() / trace_cell) + di);
        h = fnv(h, std::llround(t.imag() / trace_cell) + dj);
        return h;
    }
};

EnumeratedGroupData::EnumeratedGroupData(std::vector<CMatrix> elems, double tol, int dim)
    : dim_(dim), tol_(tol), elems_(std::move(elems)) {
    if (tol <= 0) throw DomainError("EnumeratedGroupData: tol must be > 0");
    buckets_ = std::make_shared<Buckets>();
    buckets_->cell = tol / (4.0 * dim);
    buckets_->trace_cell = tol * dim;
    for (std::size_t i = 0; i < elems_.size(); ++i) index_element(i);
}

void EnumeratedGroupData::index_element(std::size_t i) {
    const CMatrix& m = elems_[i];
    buckets_->by_entries[buckets_->entry_key(m)].push_back(static_cast<std::uint32_t>(i));
    buckets_->by_trace[buckets_->trace_key(matcore::trace(m), 0, 0)].push_back(
        static_cast<std::uint32_t>(i));
}

std::optional<std::size_t> EnumeratedGroupData::find(const CMatrix& m) const {
    auto note_match = [this](double dist) {
        if (building_) max_matched_dist_ = std::max(max_matched_dist_, dist);
    };
    // Fast path: identical quantization implies max entry diff <= sqrt(2)*cell,
    // hence Frobenius distance <= tol/2 < tol.
    const auto it = buckets_->by_entries.find(buckets_->entry_key(m));
    if (it != buckets_->by_entries.end()) {
        for (std::uint32_t idx : it->second) {
            if (matcore::max_entry_dist(m, elems_[idx]) <= 2.0 * buckets_->cell) {
                note_match(matcore::frobenius(m - elems_[idx]));
                return idx;
            }
        }
    }
    // Candidates within delta_inf < 2 tol satisfy |tr(m) - tr(g)| <= 2 d tol,
    // so they live in the 3x3 neighborhood of m's trace bucket.
    const cplx tr = matcore::trace(m);
    for (long long di = -1; di <= 1; ++di) {
        for (long long dj = -1; dj <= 1; ++dj) {
            const auto jt = buckets_->by_trace.find(buckets_->trace_key(tr, di, dj));
            if (jt == buckets_->by_trace.end()) continue;
            for (std::uint32_t idx : jt->second) {
                const double maxd = matcore::max_entry_dist(m, elems_[idx]);
                if (maxd >= 2.0 * tol_) continue;  // operator norm >= max entry
                const CMatrix diff = m - elems_[idx];
                const double fro = matcore::frobenius(diff);
                if (fro < tol_) {
                    note_match(fro);
                    return idx;
                }
                const double dist = matcore::op_norm(diff);
                if (dist < tol_) {
                    note_match(dist);
                    return idx;
                }
                if (dist < 2.0 * tol_)
                    throw PrecisionError(
                        "enumerate_closure: elements at distance inside [tol, 2 tol)");
            }
        }
    }
    return std::nullopt;
}

void EnumeratedGroupData::finalize() {
    const std::size_t n = elems_.size();
    const auto id = find(CMatrix::identity(dim_));
    if (!id) throw NumericError("enumerated group: identity not found in closure");
    identity_ = *id;
    inverse_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto inv = find(elems_[i].adjoint());
        if (!inv) throw NumericError("enumerated group: inverse not found in closure");
        inverse_[i] = *inv;
    }
    if (n <= 2048) {
        table_n_ = n;
        mult_table_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto k = find(elems_[i] * elems_[j]);
                if (!k) throw NumericError("enumerated group: product not found in closure");
                mult_table_[i * n + j] = static_cast<std::uint32_t>(*k);
            }
        }
    }
    defect_ = max_matched_dist_;
    building_ = false;
}

std::size_t EnumeratedGroupData::product_index(std::size_t i, std::size_t j) const {
    if (table_n_) return mult_table_[i * table_n_ + j];
    const auto k = find(elems_[i] * elems_[j]);
    if (!k) throw NumericError("enumerated group: product not found in closure");
    return *k;
}

std::size_t EnumeratedGroupData::inverse_index(std::size_t i) const { return inverse_[i]; }

struct ClosureBuilder {
    static std::size_t append(EnumeratedGroupData& d, CMatrix m) {
        d.elems_.push_back(std::move(m));
        d.index_element(d.elems_.size() - 1);
        return d.elems_.size() - 1;
    }
    static void finalize(EnumeratedGroupData& d) { d.finalize(); }
};

namespace {

std::string quantized_lex_key(const CMatrix& m, double cell) {
    std::ostringstream os;
    for (const cplx& v : m.data())
        os << std::llround(v.real() / cell) << ',' << std::llround(v.imag() / cell) << ';';
    return os.str();
}

}  // namespace

EnumeratedGroup enumerate_closure(const std::vector<CMatrix>& generators, double tol,
                                  std::size_t cap) {
    if (generators.empty()) throw DomainError("enumerate_closure: no generators");
    if (tol <= 0) throw DomainError("enumerate_closure: tol must be > 0");
    const int d = generators.front().dim();
    for (const auto& g : generators) {
        if (g.dim() != d) throw DomainError("enumerate_closure: generator dimension mismatch");
        const CMatrix q = g.adjoint() * g;
        double worst = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                worst = std::max(worst,
                                 std::abs(q(i, j) - (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0))));
        if (worst > tol) throw DomainError("enumerate_closure: generator is not unitary within tol");
    }

    auto data = std::make_shared<EnumeratedGroupData>(
        std::vector<CMatrix>{CMatrix::identity(d)}, tol, d);
    std::vector<std::size_t> frontier{0};
    const double cell = tol / (4.0 * d);

    while (!frontier.empty()) {
        // Collect this generation's new elements, then insert them in
        // quantized-entry lexicographic order so discovery order is canonical.
        std::vector<CMatrix> pending;
        for (std::size_t x : frontier) {
            for (const auto& g : generators) {
                CMatrix p = data->element(x) * g;
                if (!data->find(p)) pending.push_back(std::move(p));
            }
        }
        std::sort(pending.begin(), pending.end(), [&](const CMatrix& a, const CMatrix& b) {
            return quantized_lex_key(a, cell) < quantized_lex_key(b, cell);
        });
        frontier.clear();
        for (auto& p : pending) {
            if (data->find(p)) continue;  // duplicate within the batch
            if (data->size() >= cap)
                throw ClosureCapError("enumerate_closure: cap exceeded, group possibly infinite",
                                      data->size());
            frontier.push_back(ClosureBuilder::append(*data, std::move(p)));
        }
    }
    ClosureBuilder::finalize(*data);

    EnumeratedGroup out;
    out.spec = Enumerated{data};
    out.order = data->size();
    out.closure_defect = data->closure_defect();
    return out;
}

EnumeratedGroup materialize_group(const GroupSpec& spec, std::size_t cap) {
    if (std::holds_alternative<Enumerated>(spec)) {
        const auto& en = std::get<Enumerated>(spec);
        return EnumeratedGroup{en, en.data->size(), en.data->closure_defect()};
    }
    std::vector<CMatrix> mats;
    for (const Element& g : enumerate_elements(spec, cap))
        mats.push_back(element_matrix(spec, g).mat());
    auto data = std::make_shared<EnumeratedGroupData>(std::move(mats), 1e-9, dimension(spec));
    ClosureBuilder::finalize(*data);
    EnumeratedGroup out;
    out.spec = Enumerated{data};
    out.order = data->size();
    out.closure_defect = data->closure_defect();
    return out;
}

// ---------------------------------------------------------------------------
// Abelian subgroup search.

namespace {

struct IndexGroup {
    const EnumeratedGroupData* data;
    std::size_t n;
    std::size_t prod(std::size_t i, std::size_t j) const { return data->product_index(i, j); }
    bool commute(std::size_t i, std::size_t j) const { return prod(i, j) == prod(j, i); }

    std::vector<std::size_t> closure(std::vector<std::size_t> gens) const {
        std::set<std::size_t> have{data->identity_index()};
        std::vector<std::size_t> frontier(have.begin(), have.end());
        for (std::size_t g : gens)
            if (have.insert(g).second) frontier.push_back(g);
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (std::size_t x : frontier)
                for (std::size_t g : gens) {
                    const std::size_t p = prod(x, g);
                    if (have.insert(p).second) next.push_back(p);
                }
            frontier = std::move(next);
        }
        return {have.begin(), have.end()};
    }
};

std::string subgroup_signature(const std::vector<std::size_t>& sorted_elems) {
    std::ostringstream os;
    for (std::size_t v : sorted_elems) os << v << ',';
    return os.str();
}

bool witness_is_normal(const IndexGroup& G, const std::vector<std::size_t>& subgroup,
                       const std::vector<std::size_t>& gens) {
    std::unordered_set<std::size_t> inH(subgroup.begin(), subgroup.end());
    for (std::size_t g = 0; g < G.n; ++g) {
        const std::size_t ginv = G.data->inverse_index(g);
        for (std::size_t h : gens) {
            const std::size_t c = G.prod(G.prod(g, h), ginv);
            if (!inH.count(c)) return false;
        }
    }
    return true;
}

}  // namespace

AbelianIndexResult abelian_index_upper(const EnumeratedGroup& group, std::size_t exhaustive_cap) {
    const auto* data = group.spec.data.get();
    IndexGroup G{data, data->size()};
    const std::size_t n = G.n;

    std::vector<std::size_t> best{data->identity_index()};
    std::vector<std::size_t> best_gens;
    bool exact = false;

    if (n <= exhaustive_cap) {
        exact = true;
        // DFS over subgroups generated by commuting subsets; each abelian
        // subgroup is reached by adding its own elements one at a time.
        std::unordered_set<std::string> seen;
        std::function<void(const std::vector<std::size_t>&, const std::vector<std::size_t>&)> dfs =
            [&](const std::vector<std::size_t>& H, const std::vector<std::size_t>& gens) {
                if (H.size() > best.size()) {
                    best = H;
                    best_gens = gens;
                }
                std::unordered_set<std::size_t> inH(H.begin(), H.end());
                for (std::size_t x = 0; x < n; ++x) {
                    if (inH.count(x)) continue;
                    bool ok = true;
                    for (std::size_t h : H)
                        if (!G.commute(x, h)) {
                            ok = false;
                            break;
                        }
                    if (!ok) continue;
                    auto gens2 = gens;
                    gens2.push_back(x);
                    auto H2 = G.closure(gens2);
                    const std::string sig = subgroup_signature(H2);
                    if (seen.insert(sig).second) dfs(H2, gens2);
                }
            };
        dfs(G.closure({}), {});
    } else {
        // Greedy commuting extension from a few canonical seeds.
        const std::size_t seeds = std::min<std::size_t>(n, n <= 2048 ? 64 : 16);
        for (std::size_t s = 0; s < seeds; ++s) {
            std::vector<std::size_t> gens{s};
            std::vector<std::size_t> H = G.closure(gens);
            std::unordered_set<std::size_t> inH(H.begin(), H.end());
            for (std::size_t x = 0; x < n; ++x) {
                if (inH.count(x)) continue;
                bool ok = true;
                for (std::size_t g : gens)
                    if (!G.commute(x, g)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                gens.push_back(x);
                H = G.closure(gens);
                inH = std::unordered_set<std::size_t>(H.begin(), H.end());
            }
            if (H.size() > best.size()) {
                best = H;
                best_gens = gens;
            }
        }
    }

    AbelianIndexResult res;
    res.index = BigInt(static_cast<unsigned long>(n)) /
                BigInt(static_cast<unsigned long>(best.size()));
    res.witness = best;
    res.exact = exact;
    res.witness_normal = witness_is_normal(G, best, best_gens.empty() ? best : best_gens);
    return res;
}

// ---------------------------------------------------------------------------
// JSON input files.

namespace {

CMatrix matrix_from_json(const nlohmann::json& rows, int d, const char* what) {
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(d) * d)
        throw DomainError(std::string(what) + ": expected a flat row-major list of d*d [re,im] pairs");
    CMatrix m(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const auto& p = rows[static_cast<std::size_t>(i) * d + j];
            if (!p.is_array() || p.size() != 2)
                throw DomainError(std::string(what) + ": entries must be [re, im] pairs");
            m(i, j) = cplx(p[0].get<double>(), p[1].get<double>());
        }
    }
    return m;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DomainError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

GeneratorFile load_generators(const std::string& path) {
    const nlohmann::json j = load_json_file(path);
    GeneratorFile f;
    if (!j.contains("d") || !j.contains("generators"))
        throw DomainError("generator file needs fields d and generators");
    f.d = j["d"].get<int>();
    if (f.d < 1) throw DomainError("generator file: d must be >= 1");
    f.tol = j.value("tol", 1e-8);
    for (const auto& g : j["generators"]) f.generators.push_back(matrix_from_json(g, f.d, "generator"));
    if (f.generators.empty()) throw DomainError("generator file: no generators");
    return f;
}

matcore::CMatrix parse_matrix_json(const std::string& path) {
    const nlohmann::json j = load_json_file(path);
    if (!j.contains("d") || !j.contains("matrix"))
        throw DomainError("matrix file needs fields d and matrix");
    const int d = j["d"].get<int>();
    if (d < 1) throw DomainError("matrix file: d must be >= 1");
    return matrix_from_json(j["matrix"], d, "matrix");
}

GroupSpec parse_group_spec(const std::string& text, std::size_t closure_cap) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    const std::string& kind = parts[0];
    auto want_int = [&](std::size_t i) {
        if (i >= parts.size()) throw DomainError("group spec '" + text + "': missing parameter");
        try {
            const int v = std::stoi(parts[i]);
            if (v < 1) throw DomainError("group spec '" + text + "': parameter must be >= 1");
            return v;
        } catch (const DomainError&) {
            throw;
        } catch (...) {
            throw DomainError("group spec '" + text + "': bad integer");
        }
    };
    if (kind == "hyperoct") return HyperOct{want_int(1)};
    if (kind == "sym") return SymmetricAsUnitary{want_int(1)};
    if (kind == "diag-sign") return DiagSign{want_int(1)};
    if (kind == "diag-roots") return DiagRoots{want_int(1), want_int(2)};
    if (kind == "q8") {
        CMatrix gi(2), gj(2);
        gi(0, 0) = cplx(0, 1);
        gi(1, 1) = cplx(0, -1);
        gj(0, 1) = 1.0;
        gj(1, 0) = -1.0;
        return enumerate_closure({gi, gj}, 1e-8, 64).spec;
    }
    if (kind == "enum") {
        if (parts.size() < 2) throw DomainError("group spec 'enum:FILE' needs a file path");
        std::string path = parts[1];
        for (std::size_t i = 2; i < parts.size(); ++i) path += ":" + parts[i];
        const GeneratorFile f = load_generators(path);
        return enumerate_closure(f.generators, f.tol, closure_cap).spec;
    }
    throw DomainError("unknown group spec '" + text + "'");
}

}  // namespace uglab::groups
