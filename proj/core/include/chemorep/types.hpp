#pragma once

#include <array>
#include <cmath>

namespace chemorep {

/// Point or vector in the plane.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2& operator+=(const Vec2& o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

using Point2 = Vec2;

[[nodiscard]] constexpr double dot(const Vec2& a, const Vec2& b) noexcept { return a.x * b.x + a.y * b.y; }
[[nodiscard]] constexpr double cross(const Vec2& a, const Vec2& b) noexcept { return a.x * b.y - a.y * b.x; }
[[nodiscard]] inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }

/// Row-major 2x2 matrix, entry (i, j) = m[i][j].
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{};

    [[nodiscard]] constexpr double operator()(int i, int j) const noexcept { return m[i][j]; }
    [[nodiscard]] constexpr double& operator()(int i, int j) noexcept { return m[i][j]; }

    [[nodiscard]] constexpr double det() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

    [[nodiscard]] constexpr Mat2 transpose() const noexcept
    {
        return Mat2{{{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}};
    }

    [[nodiscard]] constexpr Vec2 operator*(const Vec2& v) const noexcept
    {
        return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
    }

    [[nodiscard]] constexpr Mat2 operator*(const Mat2& o) const noexcept
    {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
        return r;
    }

    [[nodiscard]] static constexpr Mat2 identity() noexcept { return Mat2{{{{1.0, 0.0}, {0.0, 1.0}}}}; }
};

} // namespace chemorep
