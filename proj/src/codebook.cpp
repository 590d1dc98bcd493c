#include "vlcmimo/codebook.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>

namespace vlcmimo {

namespace {

constexpr int kMaxMatrixSize = 64;   // CodeMatrix storage cap
constexpr int kMaxCodecSize = 20;    // largest n_t whose message space fits 64 bits
constexpr int kEnumGuardBits = 24;   // enumerate_codebook guard
constexpr int kDistanceGuardBits = 16;

constexpr std::uint64_t kFactorial[21] = {
    1ULL, 1ULL, 2ULL, 6ULL, 24ULL, 120ULL, 720ULL, 5040ULL, 40320ULL,
    362880ULL, 3628800ULL, 39916800ULL, 479001600ULL, 6227020800ULL,
    87178291200ULL, 1307674368000ULL, 20922789888000ULL, 355687428096000ULL,
    6402373705728000ULL, 121645100408832000ULL, 2432902008176640000ULL};

std::atomic<std::uint64_t> g_enumeration_count{0};

void require_codec_size(int n_t) {
    if (n_t < 2) throw std::invalid_argument("n_t must be at least 2");
    if (n_t > kMaxCodecSize)
        throw std::invalid_argument("n_t > 20: message space exceeds 64-bit integers");
}

}  // namespace

CodeMatrix::CodeMatrix(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 1 || n > kMaxMatrixSize)
        throw std::invalid_argument("matrix size must be in [1, 64]");
}

CodeMatrix CodeMatrix::identity(int n) {
    CodeMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

int CodeMatrix::row_weight(int row) const {
    int w = 0;
    for (int c = 0; c < n_; ++c) w += bits_[idx(row, c)];
    return w;
}

int CodeMatrix::col_weight(int col) const {
    int w = 0;
    for (int r = 0; r < n_; ++r) w += bits_[idx(r, col)];
    return w;
}

int CodeMatrix::weight() const {
    int w = 0;
    for (auto b : bits_) w += b;
    return w;
}

std::string CodeMatrix::row_string(int row) const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (int c = 0; c < n_; ++c)
        if (bits_[idx(row, c)]) s[static_cast<std::size_t>(c)] = '1';
    return s;
}

CodeMatrix CodeMatrix::from_rows(const std::vector<std::string>& rows) {
    const int n = static_cast<int>(rows.size());
    CodeMatrix m(n);
    for (int r = 0; r < n; ++r) {
        int c = 0;
        for (char ch : rows[static_cast<std::size_t>(r)]) {
            if (ch == ' ' || ch == '\t') continue;
            if (ch != '0' && ch != '1') throw std::invalid_argument("matrix rows must be 0/1");
            if (c >= n) throw std::invalid_argument("row longer than matrix dimension");
            m.set(r, c++, ch == '1');
        }
        if (c != n) throw std::invalid_argument("row shorter than matrix dimension");
    }
    return m;
}

CodebookSpec CodebookSpec::make(int n_t, int ones_per_row, DimmingMethod method) {
    require_codec_size(n_t);
    if (ones_per_row < 1 || ones_per_row > n_t - 1)
        throw std::invalid_argument("gamma*n_t must be an integer in [1, n_t-1]");
    if (method == DimmingMethod::Complement && ones_per_row != n_t - 1)
        throw std::invalid_argument("complement method requires gamma = (n_t-1)/n_t");
    return CodebookSpec{n_t, ones_per_row, method};
}

CodebookSpec CodebookSpec::from_gamma(int n_t, double gamma, DimmingMethod method) {
    require_codec_size(n_t);
    const double scaled = gamma * n_t;
    const int m = static_cast<int>(std::lround(scaled));
    if (std::abs(scaled - m) > 1e-9)
        throw std::invalid_argument("gamma*n_t is not an integer");
    return make(n_t, m, method);
}

int message_length(int n_t) {
    if (n_t < 2) throw std::invalid_argument("n_t must be at least 2");
    if (n_t > kMaxMatrixSize) throw std::invalid_argument("n_t must be at most 64");
    // Exact bit length of n_t! via limb arithmetic (64! needs 296 bits).
    std::vector<std::uint64_t> limbs{1};
    for (std::uint64_t f = 2; f <= static_cast<std::uint64_t>(n_t); ++f) {
        unsigned __int128 carry = 0;
        for (auto& limb : limbs) {
            const unsigned __int128 prod = static_cast<unsigned __int128>(limb) * f + carry;
            limb = static_cast<std::uint64_t>(prod);
            carry = prod >> 64;
        }
        while (carry != 0) {
            limbs.push_back(static_cast<std::uint64_t>(carry));
            carry >>= 64;
        }
    }
    const std::uint64_t top = limbs.back();
    const int bits = 64 - std::countl_zero(top) + 64 * static_cast<int>(limbs.size() - 1);
    return bits - 1;  // floor(log2(n_t!))
}

double code_rate(int n_t) {
    return static_cast<double>(message_length(n_t)) / n_t;
}

std::vector<int> lehmer_digits(int n_t, std::uint64_t value) {
    require_codec_size(n_t);
    if (value >= kFactorial[n_t]) throw std::invalid_argument("value exceeds n_t! - 1");
    std::vector<int> digits(static_cast<std::size_t>(n_t));
    std::uint64_t residue = value;
    for (int i = 0; i < n_t; ++i) {
        const std::uint64_t base = kFactorial[n_t - 1 - i];
        digits[static_cast<std::size_t>(i)] = static_cast<int>(residue / base);
        residue %= base;
    }
    return digits;
}

std::uint64_t lehmer_value(const std::vector<int>& digits) {
    const int n = static_cast<int>(digits.size());
    require_codec_size(n);
    std::uint64_t value = 0;
    for (int i = 0; i < n; ++i) {
        const int d = digits[static_cast<std::size_t>(i)];
        if (d < 0 || d > n - 1 - i) throw std::invalid_argument("digit out of range");
        value += static_cast<std::uint64_t>(d) * kFactorial[n - 1 - i];
    }
    return value;
}

namespace {

// Row i's 1 goes to the digits[i]-th smallest still-unused right-to-left
// position. Equivalent to iteratively bumping the raw digit past already
// occupied positions.
std::vector<int> positions_from_digits(const std::vector<int>& digits) {
    const int n = static_cast<int>(digits.size());
    std::vector<int> avail(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) avail[static_cast<std::size_t>(p)] = p;
    std::vector<int> positions(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto it = avail.begin() + digits[static_cast<std::size_t>(i)];
        positions[static_cast<std::size_t>(i)] = *it;
        avail.erase(it);
    }
    return positions;
}

CodeMatrix matrix_from_positions(const std::vector<int>& positions) {
    const int n = static_cast<int>(positions.size());
    CodeMatrix m(n);
    for (int i = 0; i < n; ++i)
        m.set(i, n - 1 - positions[static_cast<std::size_t>(i)], 1);
    return m;
}

std::uint64_t message_from_positions(int n_t, const std::vector<int>& positions) {
    // Downward adjustment: subtract, for each row, the number of earlier
    // rows whose position is smaller, then weight by factorials.
    std::vector<int> digits(static_cast<std::size_t>(n_t));
    for (int r = 0; r < n_t; ++r) {
        int smaller_before = 0;
        for (int t = 0; t < r; ++t)
            if (positions[static_cast<std::size_t>(t)] < positions[static_cast<std::size_t>(r)])
                ++smaller_before;
        digits[static_cast<std::size_t>(r)] = positions[static_cast<std::size_t>(r)] - smaller_before;
    }
    return lehmer_value(digits);
}

}  // namespace

CodeMatrix encode(const CodebookSpec& spec, std::uint64_t message) {
    require_codec_size(spec.n_t);
    const int k = message_length(spec.n_t);
    if (k < 64 && (message >> k) != 0)
        throw std::invalid_argument("message outside [0, 2^k)");
    const CodeMatrix perm =
        matrix_from_positions(positions_from_digits(lehmer_digits(spec.n_t, message)));
    if (spec.method == DimmingMethod::Complement) return complement(perm);
    return spec.fill_extra() > 0 ? dim_expand(perm, spec.fill_extra()) : perm;
}

std::uint64_t decode(const CodebookSpec& spec, const CodeMatrix& matrix) {
    if (matrix.size() != spec.n_t) throw NotACodeword("matrix dimension does not match spec");
    const CodeMatrix base =
        spec.method == DimmingMethod::Complement ? complement(matrix) : matrix;
    const int extra = spec.method == DimmingMethod::Complement ? 0 : spec.fill_extra();
    const CodeMatrix perm = extra > 0 ? dim_contract(base, extra) : base;

    const int n = spec.n_t;
    std::vector<int> positions(static_cast<std::size_t>(n), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int r = 0; r < n; ++r) {
        if (perm.row_weight(r) != 1) throw NotACodeword("row is not weight 1 after contraction");
        for (int c = 0; c < n; ++c) {
            if (!perm(r, c)) continue;
            const int pos = n - 1 - c;
            if (seen[static_cast<std::size_t>(pos)]) throw NotACodeword("repeated column position");
            seen[static_cast<std::size_t>(pos)] = true;
            positions[static_cast<std::size_t>(r)] = pos;
        }
    }
    const std::uint64_t value = message_from_positions(n, positions);
    const int k = message_length(n);
    if (k < 64 && (value >> k) != 0) throw NotACodeword("rank is outside the message range");
    return value;
}

CodeMatrix dim_expand(const CodeMatrix& perm, int extra) {
    const int n = perm.size();
    if (extra < 0 || extra > n - 1) throw std::invalid_argument("fill count must be in [0, n_t-1]");
    CodeMatrix out(n);
    for (int r = 0; r < n; ++r) {
        if (perm.row_weight(r) != 1) throw std::invalid_argument("input must have weight-1 rows");
        int start = 0;
        for (int c = 0; c < n; ++c)
            if (perm(r, c)) start = c;
        for (int j = 0; j <= extra; ++j) out.set(r, (start + j) % n, 1);
    }
    return out;
}

CodeMatrix dim_contract(const CodeMatrix& matrix, int extra) {
    const int n = matrix.size();
    if (extra < 0 || extra > n - 2) throw std::invalid_argument("fill count must be in [0, n_t-2]");
    CodeMatrix out(n);
    for (int r = 0; r < n; ++r) {
        if (matrix.row_weight(r) != extra + 1)
            throw NotACodeword("row weight does not match the dimming level");
        int start = -1;
        for (int c = 0; c < n; ++c) {
            if (matrix(r, c) && !matrix(r, (c + n - 1) % n)) {
                if (start >= 0) throw NotACodeword("row ones do not form a single cyclic run");
                start = c;
            }
        }
        // weight < n guarantees at least one run start; more than one was
        // rejected above, so the ones are contiguous.
        out.set(r, start, 1);
    }
    return out;
}

CodeMatrix complement(const CodeMatrix& matrix) {
    const int n = matrix.size();
    CodeMatrix out(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out.set(r, c, matrix(r, c) ? 0 : 1);
    return out;
}

bool validate(const CodebookSpec& spec, const CodeMatrix& matrix) {
    if (matrix.size() != spec.n_t) return false;
    for (int i = 0; i < spec.n_t; ++i)
        if (matrix.row_weight(i) != spec.ones_per_row || matrix.col_weight(i) != spec.ones_per_row)
            return false;
    try {
        const std::uint64_t message = decode(spec, matrix);
        return encode(spec, message) == matrix;
    } catch (const NotACodeword&) {
        return false;
    }
}

std::vector<CodeMatrix> enumerate_codebook(const CodebookSpec& spec) {
    const int k = message_length(spec.n_t);
    if (k > kEnumGuardBits) throw CapacityExceeded("codebook too large to enumerate (k > 24)");
    g_enumeration_count.fetch_add(1, std::memory_order_relaxed);
    std::vector<CodeMatrix> book;
    book.reserve(std::size_t{1} << k);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m)
        book.push_back(encode(spec, m));
    return book;
}

std::uint64_t enumeration_count() {
    return g_enumeration_count.load(std::memory_order_relaxed);
}

DistanceReport min_distance_report(const CodebookSpec& spec) {
    const int k = message_length(spec.n_t);
    if (k > kDistanceGuardBits)
        throw CapacityExceeded("codebook too large for pairwise distance scan (k > 16)");
    const auto book = enumerate_codebook(spec);
    const int n = spec.n_t;
    const int words = (n * n + 63) / 64;
    std::vector<std::uint64_t> packed(book.size() * static_cast<std::size_t>(words), 0);
    for (std::size_t a = 0; a < book.size(); ++a)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (book[a](r, c)) {
                    const int bit = r * n + c;
                    packed[a * static_cast<std::size_t>(words) + static_cast<std::size_t>(bit / 64)] |=
                        std::uint64_t{1} << (bit % 64);
                }
    int best = n * n + 1;
    for (std::size_t a = 0; a + 1 < book.size(); ++a) {
        for (std::size_t b = a + 1; b < book.size(); ++b) {
            int d = 0;
            for (int w = 0; w < words; ++w)
                d += std::popcount(packed[a * static_cast<std::size_t>(words) + static_cast<std::size_t>(w)] ^
                                   packed[b * static_cast<std::size_t>(words) + static_cast<std::size_t>(w)]);
            best = std::min(best, d);
        }
    }
    return DistanceReport{best, std::sqrt(static_cast<double>(best))};
}

int min_hamming_distance(const CodebookSpec& spec) {
    return min_distance_report(spec).min_hamming;
}

int max_run_length(const CodebookSpec& spec) {
    return 2 * (spec.n_t - spec.ones_per_row);
}

int max_nt_for_flicker(double t_b_seconds, double mftp_seconds) {
    if (!(t_b_seconds > 0.0) || !(mftp_seconds > 0.0))
        throw std::invalid_argument("durations must be positive");
    // Small epsilon so exact-integer quotients are not lost to rounding.
    const double q = (mftp_seconds + 2.0 * t_b_seconds) / (2.0 * t_b_seconds);
    return static_cast<int>(std::floor(q + 1e-9));
}

DimmingWeightRow dimming_weight_table(int n_t) {
    if (n_t < 2) throw std::invalid_argument("n_t must be at least 2");
    DimmingWeightRow row;
    row.gamma_actual = 1.0 / n_t;
    row.gamma_complement = 1.0 - 1.0 / n_t;
    row.weight_actual = n_t;
    row.weight_complement = static_cast<long>(n_t) * (n_t - 1);
    return row;
}

}  // namespace vlcmimo
