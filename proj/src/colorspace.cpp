#include "sketchtint/colorspace.hpp"

#include <algorithm>
#include <cmath>

namespace sketchtint {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// IEC 61966-2-1 sRGB -> XYZ, D65.
constexpr Mat3 kRgbToXyz = {{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};

// Reference white taken as the image of RGB(1,1,1) so white lands exactly on a*=b*=0.
constexpr std::array<double, 3> kWhite = {
    kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2],
    kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2],
    kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2],
};

constexpr double kDelta = 6.0 / 29.0;

Mat3 invert(const Mat3& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

const Mat3& xyz_to_rgb_matrix() {
    static const Mat3 inv = invert(kRgbToXyz);
    return inv;
}

double srgb_decode(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_encode(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

const std::array<double, 256>& decode_table() {
    static const auto table = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) t[i] = srgb_decode(i / 255.0);
        return t;
    }();
    return table;
}

double lab_f(double t) {
    return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double f) {
    return f > kDelta ? f * f * f : 3.0 * kDelta * kDelta * (f - 4.0 / 29.0);
}

std::uint8_t to_byte(double unit) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0));
}

}  // namespace

Lab rgb_to_lab(Rgb rgb) noexcept {
    const auto& dec = decode_table();
    const double r = dec[rgb[0]], g = dec[rgb[1]], b = dec[rgb[2]];
    std::array<double, 3> xyz{};
    for (int i = 0; i < 3; ++i) {
        xyz[i] = (kRgbToXyz[i][0] * r + kRgbToXyz[i][1] * g + kRgbToXyz[i][2] * b) / kWhite[i];
    }
    const double fx = lab_f(xyz[0]), fy = lab_f(xyz[1]), fz = lab_f(xyz[2]);
    return Lab{std::clamp(116.0 * fy - 16.0, 0.0, 100.0), 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<double, 3> lab_to_linear_rgb(const Lab& lab) noexcept {
    const double fy = (lab.l + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const std::array<double, 3> xyz = {lab_f_inv(fx) * kWhite[0], lab_f_inv(fy) * kWhite[1],
                                       lab_f_inv(fz) * kWhite[2]};
    const auto& m = xyz_to_rgb_matrix();
    std::array<double, 3> rgb{};
    for (int i = 0; i < 3; ++i) rgb[i] = m[i][0] * xyz[0] + m[i][1] * xyz[1] + m[i][2] * xyz[2];
    return rgb;
}

Rgb lab_to_rgb(const Lab& lab) noexcept {
    const auto lin = lab_to_linear_rgb(lab);
    Rgb out{};
    for (int i = 0; i < 3; ++i) out[i] = to_byte(srgb_encode(std::max(lin[i], 0.0)));
    return out;
}

Hsv rgb_to_hsv(Rgb rgb) noexcept {
    const int r = rgb[0], g = rgb[1], b = rgb[2];
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    const double chroma = mx - mn;
    Hsv out;
    out.v = mx / 255.0;
    out.s = mx == 0 ? 0.0 : chroma / mx;
    if (chroma > 0) {
        double h;
        if (mx == r) {
            h = (g - b) / chroma;
        } else if (mx == g) {
            h = (b - r) / chroma + 2.0;
        } else {
            h = (r - g) / chroma + 4.0;
        }
        h *= 60.0;
        if (h < 0) h += 360.0;
        out.h = h >= 360.0 ? h - 360.0 : h;
    }
    return out;
}

Rgb hsv_to_rgb(const Hsv& hsv) noexcept {
    const double s = std::clamp(hsv.s, 0.0, 1.0);
    const double v = std::clamp(hsv.v, 0.0, 1.0);
    double h = std::fmod(hsv.h, 360.0);
    if (h < 0) h += 360.0;
    const double hp = h / 60.0;
    const int sector = static_cast<int>(hp) % 6;
    const double frac = hp - std::floor(hp);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * frac);
    const double t = v * (1.0 - s * (1.0 - frac));
    double r = v, g = t, b = p;
    switch (sector) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
    return {to_byte(r), to_byte(g), to_byte(b)};
}

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const Lab lab = rgb_to_lab(img.pixel(i));
        out.set_pixel(i, {lab.l, lab.a, lab.b});
    }
    return out;
}

RgbImage lab_to_rgb(const LabImage& img) {
    RgbImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const auto p = img.pixel(i);
        out.set_pixel(i, lab_to_rgb(Lab{p[0], p[1], p[2]}));
    }
    return out;
}

HsvImage rgb_to_hsv(const RgbImage& img) {
    HsvImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const Hsv hsv = rgb_to_hsv(img.pixel(i));
        out.set_pixel(i, {hsv.h, hsv.s, hsv.v});
    }
    return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
    RgbImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const auto p = img.pixel(i);
        out.set_pixel(i, hsv_to_rgb(Hsv{p[0], p[1], p[2]}));
    }
    return out;
}

}  // namespace sketchtint
