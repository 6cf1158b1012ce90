//
// Project     : hcmx
// Module      : mixedprec
// Description : mixed precision and APLR lowrank storage
//

#include "hcmx/mixedprec.hpp"

#include <cmath>
#include <cstring>

#include "hcmx/half.hpp"

namespace hcmx::mp {

PackedSlice PackedSlice::pack(const Eigen::MatrixXd& m, MpFormat f) {
    PackedSlice s;
    s.format = f;
    s.rows = static_cast<std::uint32_t>(m.rows());
    s.cols = static_cast<std::uint32_t>(m.cols());
    const auto n = static_cast<std::size_t>(m.size());
    s.data.resize(n * mp_element_bytes(f));
    switch (f) {
        case MpFormat::fp64:
            std::memcpy(s.data.data(), m.data(), n * 8);
            break;
        case MpFormat::fp32: {
            auto* p = reinterpret_cast<float*>(s.data.data());
            for (std::size_t i = 0; i < n; ++i)
                p[i] = static_cast<float>(m.data()[i]);
            break;
        }
        case MpFormat::fp16: {
            auto* p = reinterpret_cast<std::uint16_t*>(s.data.data());
            for (std::size_t i = 0; i < n; ++i)
                p[i] = double_to_half(m.data()[i]);
            break;
        }
    }
    return s;
}

Eigen::MatrixXd PackedSlice::unpack() const {
    Eigen::MatrixXd m(rows, cols);
    const auto n = static_cast<std::size_t>(m.size());
    switch (format) {
        case MpFormat::fp64:
            std::memcpy(m.data(), data.data(), n * 8);
            break;
        case MpFormat::fp32: {
            const auto* p = reinterpret_cast<const float*>(data.data());
            for (std::size_t i = 0; i < n; ++i)
                m.data()[i] = p[i];
            break;
        }
        case MpFormat::fp16: {
            const auto* p = reinterpret_cast<const std::uint16_t*>(data.data());
            for (std::size_t i = 0; i < n; ++i)
                m.data()[i] = half_to_double(p[i]);
            break;
        }
    }
    return m;
}

std::vector<Eigen::Index> mp_partition(const Eigen::VectorXd& sigma, double delta,
                                       std::span<const double> roundoffs) {
    const auto p = roundoffs.size();
    std::vector<Eigen::Index> ranks(p, 0);
    for (Eigen::Index j = 0; j < sigma.size(); ++j) {
        const double s = sigma[j];
        if (s <= delta)
            continue; // truncated
        std::size_t group = 0;
        for (std::size_t i = p; i-- > 1;) {
            if (s * roundoffs[i] <= delta) {
                group = i;
                break;
            }
        }
        ++ranks[group];
    }
    return ranks;
}

double mp_error_bound(std::size_t p, std::span<const Eigen::Index> group_ranks,
                      std::span<const double> roundoffs, double delta) {
    double sum = 0.0;
    for (std::size_t i = 1; i < p; ++i)
        sum += std::sqrt(static_cast<double>(group_ranks[i])) * roundoffs[i];
    return (2.0 * static_cast<double>(p) - 1.0 + sum) * delta;
}

MPLowrank mp_compress(const lr::LowrankBlock& block, double eps) {
    MPLowrank rep;
    rep.rows = static_cast<std::uint32_t>(block.rows());
    rep.cols = static_cast<std::uint32_t>(block.cols());
    auto f = lr::svd_factors(block.U, block.V, {eps, -1});
    if (f.sigma.size() == 0) {
        rep.sigma.resize(0);
        return rep;
    }
    const double delta = eps * f.sigma[0];
    const auto ranks = mp_partition(f.sigma, delta, mp_dsh_roundoffs);

    rep.sigma = f.sigma;
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] == 0)
            continue;
        MPLowrank::Group g;
        g.format = static_cast<MpFormat>(i);
        g.w = PackedSlice::pack(f.W.middleCols(col, ranks[i]), g.format);
        g.x = PackedSlice::pack(f.X.middleCols(col, ranks[i]), g.format);
        rep.groups.push_back(std::move(g));
        col += ranks[i];
    }
    return rep;
}

Eigen::MatrixXd MPLowrank::w_matrix() const {
    Eigen::MatrixXd W(rows, rank());
    Eigen::Index col = 0;
    for (const auto& g : groups) {
        W.middleCols(col, g.w.cols) = g.w.unpack();
        col += g.w.cols;
    }
    return W;
}

Eigen::MatrixXd MPLowrank::x_matrix() const {
    Eigen::MatrixXd X(cols, rank());
    Eigen::Index col = 0;
    for (const auto& g : groups) {
        X.middleCols(col, g.x.cols) = g.x.unpack();
        col += g.x.cols;
    }
    return X;
}

lr::LowrankBlock mp_decompress(const MPLowrank& rep) {
    lr::LowrankBlock out;
    out.U = rep.w_matrix() * rep.sigma.asDiagonal();
    out.V = rep.x_matrix();
    return out;
}

std::size_t MPLowrank::byte_size() const {
    std::size_t n = 4 + 8 * static_cast<std::size_t>(sigma.size()) + 4;
    for (const auto& g : groups)
        n += 1 + 4 + g.w.byte_size() + g.x.byte_size();
    return n;
}

APLRLowrank aplr_compress(const lr::LowrankBlock& block, double eps, codec::Scheme scheme) {
    APLRLowrank rep;
    rep.scheme = scheme;
    rep.rows = static_cast<std::uint32_t>(block.rows());
    rep.cols = static_cast<std::uint32_t>(block.cols());
    auto f = lr::svd_factors(block.U, block.V, {eps, -1});
    rep.sigma = f.sigma;
    const auto k = f.sigma.size();
    if (k == 0)
        return rep;
    const double delta = eps * f.sigma[0];

    // one exponent analysis per factor keeps per-column widths monotone
    const auto e_w = codec::exponent_bits_for(std::span(f.W.data(), f.W.size()));
    const auto e_x = codec::exponent_bits_for(std::span(f.X.data(), f.X.size()));

    rep.w_cols.reserve(k);
    rep.x_cols.reserve(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double eps_i = std::min(0.5, delta / f.sigma[i]);
        const std::span<const double> wc(f.W.data() + i * f.W.rows(), f.W.rows());
        const std::span<const double> xc(f.X.data() + i * f.X.rows(), f.X.rows());
        const auto w_stats = codec::analyze(wc);
        const auto x_stats = codec::analyze(xc);
        rep.w_cols.push_back(codec::compress_block(
            wc, codec::make_descriptor(scheme, eps_i,
                                       w_stats.all_zero ? 1.0 : w_stats.min_mag, e_w)));
        rep.x_cols.push_back(codec::compress_block(
            xc, codec::make_descriptor(scheme, eps_i,
                                       x_stats.all_zero ? 1.0 : x_stats.min_mag, e_x)));
    }
    return rep;
}

Eigen::MatrixXd APLRLowrank::w_matrix() const {
    Eigen::MatrixXd W(rows, rank());
    for (Eigen::Index i = 0; i < rank(); ++i)
        codec::decompress_into(w_cols[i], W.data() + i * W.rows());
    return W;
}

Eigen::MatrixXd APLRLowrank::x_matrix() const {
    Eigen::MatrixXd X(cols, rank());
    for (Eigen::Index i = 0; i < rank(); ++i)
        codec::decompress_into(x_cols[i], X.data() + i * X.rows());
    return X;
}

lr::LowrankBlock aplr_decompress(const APLRLowrank& rep) {
    lr::LowrankBlock out;
    out.U = rep.w_matrix() * rep.sigma.asDiagonal();
    out.V = rep.x_matrix();
    return out;
}

std::size_t APLRLowrank::byte_size() const {
    std::size_t n = 4 + 4 + 8 * static_cast<std::size_t>(sigma.size());
    for (const auto& b : w_cols)
        n += b.byte_size();
    for (const auto& b : x_cols)
        n += b.byte_size();
    return n;
}

std::size_t APLRLowrank::payload_bytes() const {
    std::size_t n = 0;
    for (const auto& b : w_cols)
        n += b.payload.size();
    for (const auto& b : x_cols)
        n += b.payload.size();
    return n;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

void put_f64s(std::vector<std::uint8_t>& out, const Eigen::VectorXd& v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(v.data());
    out.insert(out.end(), p, p + 8 * v.size());
}

void need(std::size_t size, std::size_t offset, std::size_t want, const char* what) {
    if (size < offset || size - offset < want)
        throw corrupt_buffer_error(std::string("deserialize: truncated ") + what);
}

} // namespace

void serialize(const MPLowrank& rep, std::vector<std::uint8_t>& out) {
    put_u32(out, static_cast<std::uint32_t>(rep.rank()));
    put_f64s(out, rep.sigma);
    put_u32(out, static_cast<std::uint32_t>(rep.groups.size()));
    for (const auto& g : rep.groups) {
        out.push_back(static_cast<std::uint8_t>(g.format));
        put_u32(out, g.w.cols);
        out.insert(out.end(), g.w.data.begin(), g.w.data.end());
        out.insert(out.end(), g.x.data.begin(), g.x.data.end());
    }
}

MPLowrank deserialize_mp(const std::uint8_t* data, std::size_t size, std::size_t& offset,
                         std::uint32_t rows, std::uint32_t cols) {
    MPLowrank rep;
    rep.rows = rows;
    rep.cols = cols;
    need(size, offset, 4, "mp rank");
    const std::uint32_t k = get_u32(data + offset);
    offset += 4;
    need(size, offset, 8 * static_cast<std::size_t>(k) + 4, "mp sigma");
    rep.sigma.resize(k);
    std::memcpy(rep.sigma.data(), data + offset, 8 * k);
    offset += 8 * k;
    const std::uint32_t ngroups = get_u32(data + offset);
    offset += 4;
    for (std::uint32_t gi = 0; gi < ngroups; ++gi) {
        need(size, offset, 5, "mp group header");
        if (data[offset] > 2)
            throw corrupt_buffer_error("deserialize: unknown mp format tag");
        MPLowrank::Group g;
        g.format = static_cast<MpFormat>(data[offset]);
        const std::uint32_t gk = get_u32(data + offset + 1);
        offset += 5;
        const std::size_t esz = mp_element_bytes(g.format);
        const std::size_t wbytes = esz * rows * gk;
        const std::size_t xbytes = esz * cols * gk;
        need(size, offset, wbytes + xbytes, "mp group data");
        g.w.format = g.format;
        g.w.rows = rows;
        g.w.cols = gk;
        g.w.data.assign(data + offset, data + offset + wbytes);
        offset += wbytes;
        g.x.format = g.format;
        g.x.rows = cols;
        g.x.cols = gk;
        g.x.data.assign(data + offset, data + offset + xbytes);
        offset += xbytes;
        rep.groups.push_back(std::move(g));
    }
    return rep;
}

void serialize(const APLRLowrank& rep, std::vector<std::uint8_t>& out) {
    put_u32(out, static_cast<std::uint32_t>(rep.rank()));
    out.push_back(static_cast<std::uint8_t>(rep.scheme));
    out.push_back(0);
    out.push_back(0);
    out.push_back(0);
    put_f64s(out, rep.sigma);
    for (const auto& b : rep.w_cols)
        codec::serialize(b, out);
    for (const auto& b : rep.x_cols)
        codec::serialize(b, out);
}

APLRLowrank deserialize_aplr(const std::uint8_t* data, std::size_t size, std::size_t& offset,
                             std::uint32_t rows, std::uint32_t cols) {
    APLRLowrank rep;
    rep.rows = rows;
    rep.cols = cols;
    need(size, offset, 8, "aplr header");
    const std::uint32_t k = get_u32(data + offset);
    if (data[offset + 4] > 3)
        throw corrupt_buffer_error("deserialize: unknown codec scheme tag");
    rep.scheme = static_cast<codec::Scheme>(data[offset + 4]);
    offset += 8;
    need(size, offset, 8 * static_cast<std::size_t>(k), "aplr sigma");
    rep.sigma.resize(k);
    std::memcpy(rep.sigma.data(), data + offset, 8 * k);
    offset += 8 * k;
    rep.w_cols.reserve(k);
    rep.x_cols.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i)
        rep.w_cols.push_back(codec::deserialize(data, size, offset));
    for (std::uint32_t i = 0; i < k; ++i)
        rep.x_cols.push_back(codec::deserialize(data, size, offset));
    return rep;
}

} // namespace hcmx::mp
