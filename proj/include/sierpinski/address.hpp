#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sierpinski/errors.hpp"

namespace sierpinski {

/// Name of a point f_W(P_base) of the tetrahedron: a word over {0,1,2,3}
/// (applied left to right as f_{W_1} o ... o f_{W_n}) and a corner letter.
///
/// The word is packed two bits per letter with the first letter most
/// significant, so addresses of equal length compare lexicographically as
/// plain integers.
class Address {
public:
  static constexpr std::size_t kMaxLength = 31;

  constexpr Address() = default;
  explicit constexpr Address(std::uint8_t base) : base_(check_letter(base)) {}
  Address(std::span<const std::uint8_t> word, std::uint8_t base)
      : base_(check_letter(base)) {
    for (auto letter : word)
      push_back(letter);
  }
  Address(std::initializer_list<std::uint8_t> word, std::uint8_t base)
      : Address(std::span<const std::uint8_t>(word.begin(), word.size()), base) {}

  constexpr std::size_t size() const noexcept { return length_; }
  constexpr bool empty() const noexcept { return length_ == 0; }
  constexpr std::uint8_t base() const noexcept { return base_; }
  constexpr std::uint64_t packed_word() const noexcept { return bits_; }

  /// Letter k of the word, k = 0 being the outermost map.
  constexpr std::uint8_t letter(std::size_t k) const {
    if (k >= length_)
      throw ContractError("Address::letter: index out of range");
    return static_cast<std::uint8_t>((bits_ >> (2 * (length_ - 1 - k))) & 3u);
  }
  constexpr std::uint8_t back() const { return letter(length_ - 1); }

  std::vector<std::uint8_t> word() const {
    std::vector<std::uint8_t> out(length_);
    for (std::size_t k = 0; k < length_; ++k)
      out[k] = letter(k);
    return out;
  }

  constexpr void push_back(std::uint8_t letter) {
    if (length_ == kMaxLength)
      throw ResourceError("Address: word longer than " +
                          std::to_string(kMaxLength) + " letters");
    bits_ = (bits_ << 2) | check_letter(letter);
    ++length_;
  }
  constexpr void pop_back() {
    if (length_ == 0)
      throw ContractError("Address::pop_back on empty word");
    bits_ >>= 2;
    --length_;
  }
  constexpr void set_base(std::uint8_t base) { base_ = check_letter(base); }

  /// Address of f_letter(this point), i.e. the word with `letter` prepended.
  constexpr Address with_prefix(std::uint8_t letter) const {
    if (length_ == kMaxLength)
      throw ResourceError("Address: word too long to prefix");
    Address out = *this;
    out.bits_ |= static_cast<std::uint64_t>(check_letter(letter)) << (2 * length_);
    ++out.length_;
    return out;
  }

  /// Ordering: by word length, then lexicographic word, then base.
  constexpr auto operator<=>(const Address &other) const noexcept {
    if (auto c = length_ <=> other.length_; c != 0)
      return c;
    if (auto c = bits_ <=> other.bits_; c != 0)
      return c;
    return base_ <=> other.base_;
  }
  constexpr bool operator==(const Address &) const noexcept = default;

  /// Word digits, '_', base digit. P_2 is "_2", f_0(P_1) is "0_1".
  std::string to_string() const {
    std::string out;
    out.reserve(length_ + 2);
    for (std::size_t k = 0; k < length_; ++k)
      out.push_back(static_cast<char>('0' + letter(k)));
    out.push_back('_');
    out.push_back(static_cast<char>('0' + base_));
    return out;
  }

  static Address parse(std::string_view text) {
    auto sep = text.find('_');
    if (sep == std::string_view::npos || sep + 2 != text.size())
      throw DomainError("Address::parse: expected <word>_<base>, got '" +
                        std::string(text) + "'");
    Address out(digit(text[sep + 1]));
    for (char c : text.substr(0, sep))
      out.push_back(digit(c));
    return out;
  }

private:
  static constexpr std::uint8_t check_letter(std::uint8_t letter) {
    if (letter > 3)
      throw DomainError("Address: letters must lie in {0,1,2,3}");
    return letter;
  }
  static std::uint8_t digit(char c) {
    if (c < '0' || c > '3')
      throw DomainError(std::string("Address::parse: bad letter '") + c + "'");
    return static_cast<std::uint8_t>(c - '0');
  }

  std::uint64_t bits_ = 0;
  std::uint8_t length_ = 0;
  std::uint8_t base_ = 0;
};

/// Reduce an address to its canonical representative.
///
/// Two rules generate all identifications between addresses:
///   f_{W i}(P_i) = f_W(P_i)        (P_i is the fixed point of f_i)
///   f_{W j}(P_i) = f_{W i}(P_j)    (shared corner of two sibling cells)
/// Trailing letters equal to the base are stripped, then the final letter and
/// the base are sorted so that last letter < base. The result has the
/// shortest possible word, so its length is the first level at which the
/// point appears.
constexpr Address canonicalize(Address a) {
  while (!a.empty() && a.back() == a.base())
    a.pop_back();
  if (!a.empty() && a.back() > a.base()) {
    const std::uint8_t last = a.back();
    a.pop_back();
    a.push_back(a.base());
    a.set_base(last);
  }
  return a;
}

constexpr bool is_canonical(const Address &a) { return canonicalize(a) == a; }

/// Barycentric coordinates of the point, as integers over 2^size().
/// Exact for every word length the Address supports.
constexpr std::array<std::uint64_t, 4> barycentric_numerators(const Address &a) {
  std::array<std::uint64_t, 4> w{};
  w[a.base()] = 1;
  for (std::size_t k = a.size(); k-- > 0;) {
    // (X + P_i)/2 over 2^(d+1): X keeps its numerators, P_i gains 2^d.
    const std::size_t depth = a.size() - 1 - k;
    w[a.letter(k)] += std::uint64_t{1} << depth;
  }
  return w;
}

} // namespace sierpinski

template <> struct std::hash<sierpinski::Address> {
  std::size_t operator()(const sierpinski::Address &a) const noexcept {
    return std::hash<std::uint64_t>{}(a.packed_word() * 37u +
                                      (a.size() << 2) + a.base());
  }
};
