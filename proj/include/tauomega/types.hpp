#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tauomega {

enum class Polarization { H, V };

enum class DielectricModel { Mironov, Topp };

/// Dual-polarization brightness temperature in kelvin.
template <typename Scalar = double>
struct TbPairT {
  Scalar tb_h{};
  Scalar tb_v{};

  Scalar operator[](Polarization p) const { return p == Polarization::H ? tb_h : tb_v; }
  bool finite() const { return std::isfinite(tb_h) && std::isfinite(tb_v); }
  friend bool operator==(const TbPairT&, const TbPairT&) = default;
};

using TbPair = TbPairT<double>;

/// Thrown for inputs outside a model's domain. what() names the offending field.
class DomainError : public std::domain_error {
public:
  DomainError(std::string_view field, std::string_view detail)
      : std::domain_error(std::string(field) + ": " + std::string(detail)), field_(field) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Malformed configuration or data files; carries file and line when known.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string_view to_string(Polarization p);
std::string_view to_string(DielectricModel m);
DielectricModel parse_dielectric(std::string_view s);

}  // namespace tauomega
