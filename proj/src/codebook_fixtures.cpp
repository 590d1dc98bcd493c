#include "vlcmimo/codebook.hpp"

#include <array>
#include <map>

namespace vlcmimo {

namespace {

// Published reference codebooks for four transmit antennas, messages 0..15,
// one entry per dimming level of the Fill construction.
constexpr std::array<std::array<const char*, 4>, 16> kNt4Quarter = {{
    {"0001", "0010", "0100", "1000"},
    {"0001", "0010", "1000", "0100"},
    {"0001", "0100", "0010", "1000"},
    {"0001", "0100", "1000", "0010"},
    {"0001", "1000", "0010", "0100"},
    {"0001", "1000", "0100", "0010"},
    {"0010", "0001", "0100", "1000"},
    {"0010", "0001", "1000", "0100"},
    {"0010", "0100", "0001", "1000"},
    {"0010", "0100", "1000", "0001"},
    {"0010", "1000", "0001", "0100"},
    {"0010", "1000", "0100", "0001"},
    {"0100", "0001", "0010", "1000"},
    {"0100", "0001", "1000", "0010"},
    {"0100", "0010", "0001", "1000"},
    {"0100", "0010", "1000", "0001"},
}};

constexpr std::array<std::array<const char*, 4>, 16> kNt4Half = {{
    {"1001", "0011", "0110", "1100"},
    {"1001", "0011", "1100", "0110"},
    {"1001", "0110", "0011", "1100"},
    {"1001", "0110", "1100", "0011"},
    {"1001", "1100", "0011", "0110"},
    {"1001", "1100", "0110", "0011"},
    {"0011", "1001", "0110", "1100"},
    {"0011", "1001", "1100", "0110"},
    {"0011", "0110", "1001", "1100"},
    {"0011", "0110", "1100", "1001"},
    {"0011", "1100", "1001", "0110"},
    {"0011", "1100", "0110", "1001"},
    {"0110", "1001", "0011", "1100"},
    {"0110", "1001", "1100", "0011"},
    {"0110", "0011", "1001", "1100"},
    {"0110", "0011", "1100", "1001"},
}};

constexpr std::array<std::array<const char*, 4>, 16> kNt4ThreeQuarter = {{
    {"1101", "1011", "0111", "1110"},
    {"1101", "1011", "1110", "0111"},
    {"1101", "0111", "1011", "1110"},
    {"1101", "0111", "1110", "1011"},
    {"1101", "1110", "1011", "0111"},
    {"1101", "1110", "0111", "1011"},
    {"1011", "1101", "0111", "1110"},
    {"1011", "1101", "1110", "0111"},
    {"1011", "0111", "1101", "1110"},
    {"1011", "0111", "1110", "1101"},
    {"1011", "1110", "1101", "0111"},
    {"1011", "1110", "0111", "1101"},
    {"0111", "1101", "1011", "1110"},
    {"0111", "1101", "1110", "1011"},
    {"0111", "1011", "1101", "1110"},
    {"0111", "1011", "1110", "1101"},
}};

std::vector<CodeMatrix> build(const std::array<std::array<const char*, 4>, 16>& rows) {
    std::vector<CodeMatrix> book;
    book.reserve(16);
    for (const auto& entry : rows)
        book.push_back(CodeMatrix::from_rows({entry[0], entry[1], entry[2], entry[3]}));
    return book;
}

}  // namespace

const std::vector<CodeMatrix>& reference_codebook_nt4(int ones_per_row) {
    static const std::map<int, std::vector<CodeMatrix>> books = {
        {1, build(kNt4Quarter)},
        {2, build(kNt4Half)},
        {3, build(kNt4ThreeQuarter)},
    };
    const auto it = books.find(ones_per_row);
    if (it == books.end())
        throw std::invalid_argument("reference codebooks exist for ones_per_row in {1,2,3}");
    return it->second;
}

}  // namespace vlcmimo
