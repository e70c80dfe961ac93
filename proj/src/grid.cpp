#include "ym2/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace ym2 {

TorusGrid::TorusGrid(double L_, int N_) : L(L_), N(N_) {
    if (!(L > 0.0)) throw std::invalid_argument("TorusGrid: L must be positive");
    if (N < 4 || !std::has_single_bit(static_cast<unsigned>(N)))
        throw std::invalid_argument("TorusGrid: N must be a power of two >= 4");
}

double TorusGrid::xi(int k) const {
    return 2.0 * std::numbers::pi * signed_index(k) / L;
}

double TorusGrid::xi_abs(int kx, int ky) const {
    const double a = xi(kx);
    const double b = xi(ky);
    return std::sqrt(a * a + b * b);
}

double TorusGrid::nyquist() const { return std::numbers::pi * N / L; }

int TorusGrid::j_max() const {
    int j = -1;
    while (std::ldexp(1.0, j + 2) <= nyquist()) ++j;
    return j;
}

bool TorusGrid::in_domain(double x1, double x2) const {
    return x1 >= 0.0 && x1 < L && x2 >= 0.0 && x2 < L;
}

bool TorusGrid::in_window(double x1, double x2) const {
    const double m = margin();
    return x1 >= m && x1 <= L - m && x2 >= m && x2 <= L - m;
}

GridField::GridField(const TorusGrid& grid, int channels)
    : grid_(grid), channels_(channels),
      data_(grid.cells() * static_cast<std::size_t>(channels), 0.0) {
    if (channels < 1) throw std::invalid_argument("GridField: channels must be >= 1");
}

double& GridField::at(int ch, int ix, int iy) {
    return data_[(static_cast<std::size_t>(ch) * grid_.N + iy) * grid_.N + ix];
}

double GridField::at(int ch, int ix, int iy) const {
    return data_[(static_cast<std::size_t>(ch) * grid_.N + iy) * grid_.N + ix];
}

double* GridField::channel(int ch) { return data_.data() + static_cast<std::size_t>(ch) * grid_.cells(); }

const double* GridField::channel(int ch) const {
    return data_.data() + static_cast<std::size_t>(ch) * grid_.cells();
}

double GridField::sample(int ch, double x1, double x2) const {
    const int N = grid_.N;
    auto wrap = [N](long m) { return static_cast<int>(((m % N) + N) % N); };
    const int ix = wrap(std::lround(x1 / grid_.h()));
    const int iy = wrap(std::lround(x2 / grid_.h()));
    return at(ch, ix, iy);
}

double GridField::inner_l2(const GridField& f, int chf, const GridField& g, int chg) {
    if (!(f.grid_ == g.grid_)) throw std::invalid_argument("inner_l2: grid mismatch");
    const double* a = f.channel(chf);
    const double* b = g.channel(chg);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.grid_.cells(); ++i) acc += a[i] * b[i];
    return acc * f.grid_.h() * f.grid_.h();
}

void GridField::save(const std::string& path) const {
    nlohmann::json header;
    header["L"] = grid_.L;
    header["N"] = grid_.N;
    header["channels"] = channels_;
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("GridField::save: cannot open " + path);
    const std::string head = header.dump();
    std::fwrite(head.data(), 1, head.size(), fp);
    std::fputc('\n', fp);
    const std::size_t wrote = std::fwrite(data_.data(), sizeof(double), data_.size(), fp);
    std::fclose(fp);
    if (wrote != data_.size()) throw std::runtime_error("GridField::save: short write to " + path);
}

GridField GridField::load(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("GridField::load: cannot open " + path);
    std::string head;
    for (int c = std::fgetc(fp); c != EOF && c != '\n'; c = std::fgetc(fp))
        head.push_back(static_cast<char>(c));
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(head);
    } catch (const std::exception&) {
        std::fclose(fp);
        throw std::runtime_error("GridField::load: bad header in " + path);
    }
    GridField out(TorusGrid(header.at("L").get<double>(), header.at("N").get<int>()),
                  header.at("channels").get<int>());
    const std::size_t got = std::fread(out.data_.data(), sizeof(double), out.data_.size(), fp);
    std::fclose(fp);
    if (got != out.data_.size()) throw std::runtime_error("GridField::load: truncated data in " + path);
    return out;
}

}  // namespace ym2
