#include "scnn/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace scnn {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'C', 'T', '1'};
constexpr std::uint32_t kMaxRank = 16;

template <typename T>
void put_le(std::ostream& os, T value)
{
    std::array<unsigned char, sizeof(T)> bytes;
    for (std::size_t b = 0; b < sizeof(T); ++b)
        bytes[b] = static_cast<unsigned char>((value >> (8 * b)) & 0xff);
    os.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& is)
{
    std::array<unsigned char, sizeof(T)> bytes;
    if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
        throw FormatError("SCT1: truncated stream");
    T value = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b)
        value |= static_cast<T>(bytes[b]) << (8 * b);
    return value;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

void write_sct1(std::ostream& os, const Tensor& t)
{
    os.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
    for (auto e : t.shape())
        put_le<std::uint64_t>(os, e);
    for (double v : t.data())
        put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
    if (!os)
        throw FormatError("SCT1: write failed");
}

Tensor read_sct1(std::istream& is)
{
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw FormatError("SCT1: bad magic");
    const auto rank = get_le<std::uint32_t>(is);
    if (rank == 0 || rank > kMaxRank)
        throw FormatError("SCT1: unsupported rank " + std::to_string(rank));
    Shape shape(rank);
    for (auto& e : shape) {
        e = get_le<std::uint64_t>(is);
        if (e == 0)
            throw FormatError("SCT1: zero extent");
    }
    std::vector<double> data(shape_volume(shape));
    for (auto& v : data)
        v = std::bit_cast<double>(get_le<std::uint64_t>(is));
    return Tensor(std::move(shape), std::move(data));
}

void save_sct1(const std::filesystem::path& path, const Tensor& t)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw FormatError("cannot open " + path.string() + " for writing");
    write_sct1(os, t);
}

Tensor load_sct1(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw FormatError("cannot open " + path.string());
    return read_sct1(is);
}

void save_sidecar(const std::filesystem::path& path, const Sidecar& kv)
{
    std::ofstream os(path);
    if (!os)
        throw FormatError("cannot open " + path.string() + " for writing");
    for (const auto& [k, v] : kv)
        os << k << '=' << v << '\n';
}

Sidecar parse_key_values(std::istream& is)
{
    Sidecar kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("line " + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

Sidecar load_sidecar(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw FormatError("cannot open " + path.string());
    return parse_key_values(is);
}

} // namespace scnn
