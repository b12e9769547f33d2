#include "similarity.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "errors.hpp"
#include "hash.hpp"

namespace netcf {

namespace {
constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
}

SimilarityMatrix::SimilarityMatrix(Axis axis, std::uint32_t n, std::string measure_tag)
    : axis_(axis), n_(n), tag_(std::move(measure_tag)),
      s_(static_cast<std::size_t>(n) * n, kUndefined) {}

void SimilarityMatrix::set(std::uint32_t i, std::uint32_t j, double v) {
    if (i == j) throw DomainError("self-similarity is not writable");
    s_[static_cast<std::size_t>(i) * n_ + j] = v;
    s_[static_cast<std::size_t>(j) * n_ + i] = v;
}

std::size_t SimilarityMatrix::undefined_pairs() const {
    std::size_t count = 0;
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = i + 1; j < n_; ++j)
            if (!defined(i, j)) ++count;
    return count;
}

std::uint64_t SimilarityMatrix::content_hash() const {
    Fnv1a h;
    h.add_string(tag_);
    h.add_u32(axis_ == Axis::user ? 0 : 1);
    h.add_u32(n_);
    for (double v : s_) h.add_double(v);
    return h.value();
}

void SimilarityMatrix::load_storage(std::vector<double> s) {
    if (s.size() != static_cast<std::size_t>(n_) * n_)
        throw DomainError("similarity storage size mismatch");
    s_ = std::move(s);
}

namespace {

/// Per-pair accumulation context shared by the co-rated measures.
struct CoRated {
    std::vector<double> a, b;           // co-rated rating pairs
    std::vector<std::uint32_t> counter; // co-rated counterpart indices
};

void collect_corated(const std::vector<RatedEntry>& pa, const std::vector<RatedEntry>& pb,
                     CoRated& out) {
    out.a.clear();
    out.b.clear();
    out.counter.clear();
    std::size_t x = 0, y = 0;
    while (x < pa.size() && y < pb.size()) {
        if (pa[x].index < pb[y].index) {
            ++x;
        } else if (pb[y].index < pa[x].index) {
            ++y;
        } else {
            out.a.push_back(pa[x].value);
            out.b.push_back(pb[y].value);
            out.counter.push_back(pa[x].index);
            ++x;
            ++y;
        }
    }
}

std::size_t corated_count(const std::vector<RatedEntry>& pa, const std::vector<RatedEntry>& pb) {
    std::size_t n = 0, x = 0, y = 0;
    while (x < pa.size() && y < pb.size()) {
        if (pa[x].index < pb[y].index)
            ++x;
        else if (pb[y].index < pa[x].index)
            ++y;
        else {
            ++n;
            ++x;
            ++y;
        }
    }
    return n;
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Rounding can push a correlation an ulp past +-1; pin it back.
double clamp_correlation(double v) { return std::min(1.0, std::max(-1.0, v)); }

/// Centered correlation of the collected pairs; NaN when undefined.
double centered_correlation(const CoRated& c, double center_a, double center_b) {
    double num = 0, da = 0, db = 0;
    for (std::size_t k = 0; k < c.a.size(); ++k) {
        double xa = c.a[k] - center_a;
        double xb = c.b[k] - center_b;
        num += xa * xb;
        da += xa * xa;
        db += xb * xb;
    }
    if (da == 0.0 || db == 0.0) return kUndefined;
    return clamp_correlation(num / (std::sqrt(da * db)));
}

/// Means of every entity profile on `axis`; NaN for empty profiles.
std::vector<double> profile_means(const RatingMatrix& m, Axis axis) {
    std::vector<double> means(m.n(axis), kUndefined);
    for (std::uint32_t e = 0; e < m.n(axis); ++e)
        if (auto mu = m.entity_mean(axis, e)) means[e] = *mu;
    return means;
}

std::vector<double> profile_stddevs(const RatingMatrix& m, Axis axis,
                                    const std::vector<double>& means) {
    std::vector<double> sd(m.n(axis), 0.0);
    for (std::uint32_t e = 0; e < m.n(axis); ++e) {
        const auto& profile = m.ratings(axis, e);
        if (profile.empty()) continue;
        double acc = 0;
        for (const auto& r : profile) {
            double d = r.value - means[e];
            acc += d * d;
        }
        sd[e] = std::sqrt(acc / static_cast<double>(profile.size()));
    }
    return sd;
}

template <typename PairFn>
SimilarityMatrix compute_pairwise(const RatingMatrix& m, Axis axis, std::string tag, PairFn fn) {
    std::uint32_t n = m.n(axis);
    SimilarityMatrix s(axis, n, std::move(tag));
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            double v = fn(i, j);
            if (v == v) s.set(i, j, v);
        }
    return s;
}

} // namespace

SimilarityMatrix pcc(const RatingMatrix& m, Axis axis, PccCentering centering) {
    auto global = profile_means(m, axis);
    CoRated c;
    return compute_pairwise(m, axis, "pcc", [&](std::uint32_t i, std::uint32_t j) {
        collect_corated(m.ratings(axis, i), m.ratings(axis, j), c);
        if (c.a.size() < 2) return kUndefined;
        double ca = centering == PccCentering::corated ? mean_of(c.a) : global[i];
        double cb = centering == PccCentering::corated ? mean_of(c.b) : global[j];
        return centered_correlation(c, ca, cb);
    });
}

SimilarityMatrix cosine(const RatingMatrix& m, Axis axis) {
    std::uint32_t n = m.n(axis);
    std::vector<double> norm2(n, 0.0);
    for (std::uint32_t e = 0; e < n; ++e)
        for (const auto& r : m.ratings(axis, e)) norm2[e] += r.value * r.value;

    CoRated c;
    return compute_pairwise(m, axis, "cosine", [&](std::uint32_t i, std::uint32_t j) {
        if (norm2[i] == 0.0 || norm2[j] == 0.0) return kUndefined;
        collect_corated(m.ratings(axis, i), m.ratings(axis, j), c);
        double dot = 0;
        for (std::size_t k = 0; k < c.a.size(); ++k) dot += c.a[k] * c.b[k];
        return std::min(1.0, dot / (std::sqrt(norm2[i] * norm2[j])));
    });
}

SimilarityMatrix adjusted_cosine(const RatingMatrix& m, Axis axis) {
    if (axis != Axis::item)
        throw DomainError("adjusted cosine is an item-item measure; axis=user is unsupported");
    auto user_means = profile_means(m, Axis::user);
    CoRated c;
    return compute_pairwise(m, axis, "adjcos", [&](std::uint32_t i, std::uint32_t j) {
        collect_corated(m.ratings(Axis::item, i), m.ratings(Axis::item, j), c);
        if (c.a.size() < 2) return kUndefined;
        double num = 0, da = 0, db = 0;
        for (std::size_t k = 0; k < c.a.size(); ++k) {
            double mu = user_means[c.counter[k]];
            double xa = c.a[k] - mu;
            double xb = c.b[k] - mu;
            num += xa * xb;
            da += xa * xa;
            db += xb * xb;
        }
        if (da == 0.0 || db == 0.0) return kUndefined;
        return clamp_correlation(num / (std::sqrt(da * db)));
    });
}

SimilarityMatrix cpcc(const RatingMatrix& m, Axis axis) {
    double med = m.domain().median();
    CoRated c;
    auto s = compute_pairwise(m, axis, "cpcc", [&](std::uint32_t i, std::uint32_t j) {
        collect_corated(m.ratings(axis, i), m.ratings(axis, j), c);
        if (c.a.empty()) return kUndefined;
        return centered_correlation(c, med, med);
    });
    return s;
}

SimilarityMatrix jaccard_corated(const RatingMatrix& m, Axis axis) {
    return compute_pairwise(m, axis, "jaccard-corated", [&](std::uint32_t i, std::uint32_t j) {
        const auto& pa = m.ratings(axis, i);
        const auto& pb = m.ratings(axis, j);
        auto inter = static_cast<double>(corated_count(pa, pb));
        double uni = static_cast<double>(pa.size() + pb.size()) - inter;
        if (uni == 0.0) return kUndefined;
        return inter / uni;
    });
}

SimilarityMatrix pip(const RatingMatrix& m, Axis axis) {
    Axis counter_axis = axis == Axis::user ? Axis::item : Axis::user;
    auto counter_means = profile_means(m, counter_axis);
    double med = m.domain().median();
    double top = 2.0 * m.domain().span() + 1.0;

    CoRated c;
    return compute_pairwise(m, axis, "pip", [&](std::uint32_t i, std::uint32_t j) {
        collect_corated(m.ratings(axis, i), m.ratings(axis, j), c);
        if (c.a.empty()) return kUndefined;
        double sum = 0;
        for (std::size_t k = 0; k < c.a.size(); ++k) {
            double r1 = c.a[k], r2 = c.b[k];
            bool agree = !((r1 > med && r2 < med) || (r1 < med && r2 > med));
            double dist = agree ? std::fabs(r1 - r2) : 2.0 * std::fabs(r1 - r2);
            double proximity = (top - dist) * (top - dist);
            double impact = (std::fabs(r1 - med) + 1.0) * (std::fabs(r2 - med) + 1.0);
            if (!agree) impact = 1.0 / impact;
            double mu = counter_means[c.counter[k]];
            double popularity = 1.0;
            if ((r1 > mu && r2 > mu) || (r1 < mu && r2 < mu)) {
                double d = (r1 + r2) / 2.0 - mu;
                popularity = 1.0 + d * d;
            }
            sum += proximity * impact * popularity;
        }
        return sum;
    });
}

SimilarityMatrix nhsm(const RatingMatrix& m, Axis axis) {
    Axis counter_axis = axis == Axis::user ? Axis::item : Axis::user;
    auto counter_means = profile_means(m, counter_axis);
    auto means = profile_means(m, axis);
    auto sds = profile_stddevs(m, axis, means);
    double med = m.domain().median();

    CoRated c;
    return compute_pairwise(m, axis, "nhsm", [&](std::uint32_t i, std::uint32_t j) {
        const auto& pa = m.ratings(axis, i);
        const auto& pb = m.ratings(axis, j);
        collect_corated(pa, pb, c);
        if (c.a.empty()) return kUndefined;
        double pss = 0;
        for (std::size_t k = 0; k < c.a.size(); ++k) {
            double r1 = c.a[k], r2 = c.b[k];
            double proximity = 1.0 - 1.0 / (1.0 + std::exp(-std::fabs(r1 - r2)));
            double significance =
                1.0 / (1.0 + std::exp(-std::fabs(r1 - med) * std::fabs(r2 - med)));
            double mu = counter_means[c.counter[k]];
            double singularity = 1.0 - 1.0 / (1.0 + std::exp(-std::fabs((r1 + r2) / 2.0 - mu)));
            pss += proximity * significance * singularity;
        }
        double jaccard_mod = static_cast<double>(c.a.size()) /
                             (static_cast<double>(pa.size()) * static_cast<double>(pb.size()));
        double urp =
            1.0 - 1.0 / (1.0 + std::exp(-std::fabs(means[i] - means[j]) * std::fabs(sds[i] - sds[j])));
        return pss * jaccard_mod * urp;
    });
}

void export_similarity_csv(const SimilarityMatrix& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write similarity csv: " + path);
    out << "i,j,score\n";
    char buf[40];
    for (std::uint32_t i = 0; i < s.size(); ++i)
        for (std::uint32_t j = i + 1; j < s.size(); ++j) {
            auto v = s.get(i, j);
            if (v) {
                std::snprintf(buf, sizeof buf, "%.17g", *v);
                out << i << ',' << j << ',' << buf << '\n';
            } else {
                out << i << ',' << j << ",NA\n";
            }
        }
    if (!out) throw IoError("write failed: " + path);
}

namespace {
constexpr char kCacheMagic[8] = {'N', 'C', 'F', 'S', 'I', 'M', '1', '\0'};
}

void save_similarity_cache(const SimilarityMatrix& s, std::uint64_t dataset_hash,
                           const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write similarity cache: " + path);
    out.write(kCacheMagic, 8);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(s.axis() == Axis::user ? 0u : 1u);
    put_u32(s.size());
    put_u64(dataset_hash);
    put_u32(static_cast<std::uint32_t>(s.measure_tag().size()));
    out.write(s.measure_tag().data(), static_cast<std::streamsize>(s.measure_tag().size()));
    const auto& meta = s.meta();
    put_u32(meta.present ? 1u : 0u);
    put_f64(meta.beta);
    put_f64(meta.lambda1);
    put_u64(meta.network_hash);
    out.write(reinterpret_cast<const char*>(s.storage().data()),
              static_cast<std::streamsize>(s.storage().size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path);
}

std::optional<SimilarityMatrix> load_similarity_cache(const std::string& path,
                                                      std::uint64_t dataset_hash,
                                                      const std::string& measure, Axis axis) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCacheMagic, 8) != 0) return std::nullopt;
    auto get_u32 = [&] {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_u64 = [&] {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto get_f64 = [&] {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    Axis file_axis = get_u32() == 0 ? Axis::user : Axis::item;
    std::uint32_t n = get_u32();
    std::uint64_t file_hash = get_u64();
    std::uint32_t tag_len = get_u32();
    std::string tag(tag_len, '\0');
    in.read(tag.data(), tag_len);
    SimilarityMatrix::StructuralMeta meta;
    meta.present = get_u32() != 0;
    meta.beta = get_f64();
    meta.lambda1 = get_f64();
    meta.network_hash = get_u64();
    if (!in) return std::nullopt;
    if (file_axis != axis || file_hash != dataset_hash || tag != measure) return std::nullopt;

    std::vector<double> storage(static_cast<std::size_t>(n) * n);
    in.read(reinterpret_cast<char*>(storage.data()),
            static_cast<std::streamsize>(storage.size() * sizeof(double)));
    if (!in) return std::nullopt;
    SimilarityMatrix s(axis, n, tag);
    s.load_storage(std::move(storage));
    s.set_meta(meta);
    return s;
}

} // namespace netcf
