#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlcmimo {

// Thrown when a matrix handed to decode/contract is not a member of the
// code it claims to belong to.
struct NotACodeword : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an operation would enumerate or store more codewords than the
// configured guard allows.
struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Square binary code matrix. Rows are transmit antennas (top to bottom),
// display columns are time slots (left to right). The unranking/ranking
// logic counts "positions" from the rightmost column leftwards, so
// position p corresponds to display column n-1-p.
class CodeMatrix {
public:
    explicit CodeMatrix(int n);

    static CodeMatrix identity(int n);

    int size() const { return n_; }

    std::uint8_t operator()(int row, int col) const { return bits_[idx(row, col)]; }
    void set(int row, int col, std::uint8_t v) { bits_[idx(row, col)] = v ? 1 : 0; }

    int row_weight(int row) const;
    int col_weight(int col) const;
    int weight() const;

    // Row as a compact digit string, e.g. "0101".
    std::string row_string(int row) const;

    bool operator==(const CodeMatrix& other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }
    bool operator!=(const CodeMatrix& other) const { return !(*this == other); }

    // Parses rows given as digit strings ("0101") or space separated
    // ("0 1 0 1"); throws std::invalid_argument on malformed input.
    static CodeMatrix from_rows(const std::vector<std::string>& rows);

private:
    int idx(int row, int col) const { return row * n_ + col; }

    int n_;
    std::vector<std::uint8_t> bits_;
};

enum class DimmingMethod { Fill, Complement };

// Identifies one codebook: N_t transmit antennas, dimming factor
// gamma = ones_per_row / n_t, and the construction used for gamma > 1/n_t.
struct CodebookSpec {
    int n_t = 4;
    int ones_per_row = 1;  // M = gamma * n_t, in [1, n_t-1]
    DimmingMethod method = DimmingMethod::Fill;

    double gamma() const { return static_cast<double>(ones_per_row) / n_t; }
    // Extra ones appended to the right of each row's seed 1 (Fill method).
    int fill_extra() const { return ones_per_row - 1; }

    // Validates and builds a spec; gamma is given as M/n_t.
    static CodebookSpec make(int n_t, int ones_per_row,
                             DimmingMethod method = DimmingMethod::Fill);

    // Convenience for decimal gamma values; requires gamma*n_t to be within
    // 1e-9 of an integer.
    static CodebookSpec from_gamma(int n_t, double gamma,
                                   DimmingMethod method = DimmingMethod::Fill);
};

// Number of message bits carried by one code matrix: floor(log2(n_t!)).
// Exact for n_t up to 64.
int message_length(int n_t);

// message_length(n_t) / n_t, in bits per time slot.
double code_rate(int n_t);

// Factoradic digit expansion of a message value: digits[i] in [0, n_t-1-i].
std::vector<int> lehmer_digits(int n_t, std::uint64_t value);

// Inverse of lehmer_digits: sum of digits[i] * (n_t-1-i)!.
std::uint64_t lehmer_value(const std::vector<int>& digits);

// Maps a message in [0, 2^k) to its code matrix.
CodeMatrix encode(const CodebookSpec& spec, std::uint64_t message);

// Inverse of encode; throws NotACodeword for matrices outside the codebook.
std::uint64_t decode(const CodebookSpec& spec, const CodeMatrix& matrix);

// Extends each row's single 1 with `extra` additional ones placed on the
// display-right side, wrapping to column 0 past the matrix edge. Output
// rows and columns all have weight extra+1.
CodeMatrix dim_expand(const CodeMatrix& perm, int extra);

// Inverse of dim_expand: recovers the permutation matrix of run starts
// (the unique 1 in each row whose cyclic left neighbour is 0).
CodeMatrix dim_contract(const CodeMatrix& matrix, int extra);

// Bitwise complement, flipping the dimming factor gamma to 1-gamma.
CodeMatrix complement(const CodeMatrix& matrix);

// Membership test; total and O(n_t^2), never enumerates the codebook.
bool validate(const CodebookSpec& spec, const CodeMatrix& matrix);

// All 2^k codewords in message order. Guarded at k <= 24.
std::vector<CodeMatrix> enumerate_codebook(const CodebookSpec& spec);

// Number of times enumerate_codebook has run in this process; lets tests
// assert that the linear detectors never fall back to codebook search.
std::uint64_t enumeration_count();

struct DistanceReport {
    int min_hamming = 0;
    // Minimum Euclidean distance in units of sqrt(E_s): sqrt(min_hamming).
    double min_euclidean = 0.0;
};

// Exhaustive pairwise minimum distance over the codebook. Guarded at
// k <= 16 (the scan is quadratic in the codebook size).
DistanceReport min_distance_report(const CodebookSpec& spec);
int min_hamming_distance(const CodebookSpec& spec);

// Worst-case zero run per transmit antenna across consecutive codewords:
// 2*n_t*(1-gamma).
int max_run_length(const CodebookSpec& spec);

// Largest N_t whose worst-case run keeps flicker below the maximum
// flickering time period: floor((mftp + 2*t_b) / (2*t_b)).
int max_nt_for_flicker(double t_b_seconds, double mftp_seconds);

struct DimmingWeightRow {
    double gamma_actual = 0.0;      // 1/n_t
    double gamma_complement = 0.0;  // 1 - 1/n_t
    long weight_actual = 0;         // n_t
    long weight_complement = 0;     // n_t*(n_t-1)
};

// Weight/dimming relation between the base codes and their complements.
DimmingWeightRow dimming_weight_table(int n_t);

// Reference codebooks for n_t=4 (gamma 1/4, 2/4, 3/4, Fill method), used by
// the CLI verification mode and the golden tests.
const std::vector<CodeMatrix>& reference_codebook_nt4(int ones_per_row);

}  // namespace vlcmimo
