#include "dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "errors.hpp"

namespace netcf {

FileFormat parse_format_name(const std::string& name) {
    if (name == "auto" || name.empty()) return FileFormat::auto_detect;
    if (name == "csv") return FileFormat::csv;
    if (name == "tsv") return FileFormat::tsv;
    if (name == "dcolon") return FileFormat::dcolon;
    throw DomainError("unknown file format '" + name + "' (expected csv, tsv, dcolon or auto)");
}

const char* format_name(FileFormat f) {
    switch (f) {
        case FileFormat::csv: return "csv";
        case FileFormat::tsv: return "tsv";
        case FileFormat::dcolon: return "dcolon";
        default: return "auto";
    }
}

namespace {

std::vector<std::string> split_row(const std::string& line, FileFormat f) {
    std::vector<std::string> fields;
    if (f == FileFormat::dcolon) {
        std::size_t pos = 0;
        for (;;) {
            std::size_t next = line.find("::", pos);
            if (next == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, next - pos));
            pos = next + 2;
        }
    } else {
        char delim = f == FileFormat::tsv ? '\t' : ',';
        std::size_t pos = 0;
        for (;;) {
            std::size_t next = line.find(delim, pos);
            if (next == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, next - pos));
            pos = next + 1;
        }
    }
    return fields;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0';
}

FileFormat sniff(const std::string& line) {
    if (line.find("::") != std::string::npos) return FileFormat::dcolon;
    if (line.find('\t') != std::string::npos) return FileFormat::tsv;
    return FileFormat::csv;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

// Ids sort numerically when they look like plain non-negative integers and
// lexicographically otherwise, so the dense index assignment is canonical:
// loading the same rows in any order produces the same matrix.
bool id_less(const std::string& a, const std::string& b) {
    auto numeric = [](const std::string& s, unsigned long long& v) {
        if (s.empty() || s.size() > 18) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        v = std::stoull(s);
        return true;
    };
    unsigned long long va = 0, vb = 0;
    bool na = numeric(a, va), nb = numeric(b, vb);
    if (na != nb) return na; // numeric ids before non-numeric
    if (na && va != vb) return va < vb;
    return a < b;
}

std::vector<std::string> sorted_ids(const std::unordered_map<std::string, std::uint32_t>& seen) {
    std::vector<std::string> ids;
    ids.reserve(seen.size());
    for (const auto& [id, _] : seen) ids.push_back(id);
    std::sort(ids.begin(), ids.end(), id_less);
    return ids;
}

} // namespace

RatingMatrix load_ratings(const std::string& path, FileFormat format, RatingDomain domain) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open rating file: " + path);

    std::unordered_map<std::string, std::uint32_t> user_index, item_index;
    struct RawTriple {
        std::uint32_t user, item;
        double value;
    };
    std::vector<RawTriple> raw;

    std::string line;
    long lineno = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        if (format == FileFormat::auto_detect) format = sniff(line);

        auto fields = split_row(line, format);
        if (fields.size() < 3)
            throw ParseError("expected user, item, rating fields", lineno);

        double value = 0;
        if (!parse_number(fields[2], value)) {
            // A non-numeric rating on the first row is a header; skip it.
            if (first_data_row) {
                first_data_row = false;
                continue;
            }
            throw ParseError("rating field '" + fields[2] + "' is not a number", lineno);
        }
        first_data_row = false;

        if (!domain.contains(value) || value != static_cast<double>(static_cast<long long>(value)))
            throw ValidationError("rating " + fields[2] + " outside rating domain [" +
                                  std::to_string(domain.lo) + "-" + std::to_string(domain.hi) +
                                  "] at line " + std::to_string(lineno));

        auto intern = [](std::unordered_map<std::string, std::uint32_t>& index,
                         const std::string& id) {
            auto it = index.find(id);
            if (it != index.end()) return it->second;
            auto idx = static_cast<std::uint32_t>(index.size());
            index.emplace(id, idx);
            return idx;
        };
        raw.push_back({intern(user_index, fields[0]), intern(item_index, fields[1]), value});
    }

    // Canonical dense indices: ids in sorted order.
    auto user_ids = sorted_ids(user_index);
    auto item_ids = sorted_ids(item_index);
    std::vector<std::uint32_t> user_remap(user_index.size()), item_remap(item_index.size());
    for (std::uint32_t i = 0; i < user_ids.size(); ++i) user_remap[user_index[user_ids[i]]] = i;
    for (std::uint32_t i = 0; i < item_ids.size(); ++i) item_remap[item_index[item_ids[i]]] = i;

    std::vector<RatingTriple> triples;
    triples.reserve(raw.size());
    for (const auto& t : raw) triples.push_back({user_remap[t.user], item_remap[t.item], t.value});

    auto n_users = static_cast<std::uint32_t>(user_ids.size());
    auto n_items = static_cast<std::uint32_t>(item_ids.size());
    return RatingMatrix::from_triples(n_users, n_items, triples, domain, std::move(user_ids),
                                      std::move(item_ids));
}

void write_canonical_csv(const RatingMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write rating file: " + path);
    out << "user_id,item_id,rating\n";
    for (std::uint32_t u = 0; u < m.n_users(); ++u)
        for (const auto& r : m.user_ratings(u))
            out << m.user_id(u) << ',' << m.item_id(r.index) << ',' << static_cast<long long>(r.value)
                << '\n';
    if (!out) throw IoError("write failed: " + path);
}

} // namespace netcf
