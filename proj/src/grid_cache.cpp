#include <fstream>
#include <string>

#include "zetacorr/binary_io.hpp"
#include "zetacorr/errors.hpp"
#include "zetacorr/zeta.hpp"

namespace zetacorr {

void cache_write(const ZetaGrid& grid, const std::filesystem::path& path) {
    if (grid.size() == 0) throw DomainError("refusing to cache an empty grid");
    // Write to a sibling temp file and rename, so readers never see a partial grid.
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw CacheError("cannot open " + tmp.string() + " for writing");
        binary::put_magic(os, "ZGRD");
        binary::put<std::uint32_t>(os, kGridFileVersion);
        binary::put<std::uint32_t>(os, grid.modulus_only ? kGridFlagModulusOnly : 0u);
        binary::put<double>(os, grid.t0);
        binary::put<double>(os, grid.step);
        binary::put<std::uint64_t>(os, grid.size());
        if (grid.modulus_only) {
            for (double m : grid.moduli) binary::put<double>(os, m);
        } else {
            for (const auto& z : grid.values) {
                binary::put<double>(os, z.real());
                binary::put<double>(os, z.imag());
            }
        }
        if (!os) throw CacheError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw CacheError("cannot move cache into place: " + ec.message());
}

ZetaGrid cache_read(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CacheError("cannot open " + path.string());
    binary::expect_magic(is, "ZGRD");
    const auto version = binary::get<std::uint32_t>(is, "version");
    if (version != kGridFileVersion)
        throw CacheVersionError("grid cache version " + std::to_string(version) + ", expected " +
                                std::to_string(kGridFileVersion));
    const auto flags = binary::get<std::uint32_t>(is, "flags");
    if (flags & ~kGridFlagModulusOnly) throw CacheError("unknown grid cache flags");

    ZetaGrid g;
    g.modulus_only = (flags & kGridFlagModulusOnly) != 0;
    g.t0 = binary::get<double>(is, "t0");
    g.step = binary::get<double>(is, "step");
    const auto count = binary::get<std::uint64_t>(is, "count");
    if (!(g.step > 0.0) || count == 0) throw CacheError("grid cache header is inconsistent");

    const std::uint64_t per = g.modulus_only ? 8 : 16;
    std::error_code ec;
    const auto fsize = std::filesystem::file_size(path, ec);
    if (ec || count > (fsize - 36) / per || fsize != 36 + per * count)
        throw CacheError("grid cache is truncated or has trailing bytes");

    if (g.modulus_only) {
        g.moduli.resize(count);
        for (auto& m : g.moduli) m = binary::get<double>(is, "moduli");
    } else {
        g.values.resize(count);
        for (auto& z : g.values) {
            const double re = binary::get<double>(is, "values");
            const double im = binary::get<double>(is, "values");
            z = {re, im};
        }
    }
    return g;
}

}  // namespace zetacorr
