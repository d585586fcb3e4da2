#pragma once

#include <numeric>
#include <stdexcept>
#include <string>

namespace incmeter {

// Exact rational number, gcd-reduced, denominator > 0.
// Measure values never leave [0,1], so long long is plenty of headroom.
class Rational {
 public:
  Rational() = default;
  Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  long long num() const { return num_; }
  long long den() const { return den_; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a == b || a < b;
  }

  // Decimal rendering rounded to `significant` digits (half-up), trailing
  // zeros trimmed: 1/4 -> "0.25", 1/3 -> "0.3333333333".
  std::string to_decimal(int significant = 10) const {
    if (significant < 1) throw std::invalid_argument("Rational: significant < 1");
    if (num_ == 0) return "0";
    unsigned long long n = static_cast<unsigned long long>(num_ < 0 ? -num_ : num_);
    unsigned long long d = static_cast<unsigned long long>(den_);

    std::string digits;  // significant digit stream, most significant first
    long long exponent;  // value = 0.<digits> * 10^exponent
    unsigned long long rem;
    if (n >= d) {
      std::string head = std::to_string(n / d);
      digits = head;
      exponent = static_cast<long long>(head.size());
      rem = n % d;
    } else {
      // skip leading fractional zeros, they are not significant
      exponent = 0;
      rem = n;
      while (true) {
        rem *= 10;
        unsigned long long q = rem / d;
        rem %= d;
        if (q == 0) {
          --exponent;
          if (rem == 0) return "0";
        } else {
          digits.push_back(static_cast<char>('0' + q));
          break;
        }
      }
    }
    while (rem != 0 && digits.size() < static_cast<std::size_t>(significant) + 1) {
      rem *= 10;
      digits.push_back(static_cast<char>('0' + rem / d));
      rem %= d;
    }
    if (digits.size() > static_cast<std::size_t>(significant)) {
      bool round_up = digits.back() >= '5';
      digits.pop_back();
      if (round_up) {
        int i = static_cast<int>(digits.size()) - 1;
        for (; i >= 0; --i) {
          if (digits[i] == '9') {
            digits[i] = '0';
          } else {
            ++digits[i];
            break;
          }
        }
        if (i < 0) {
          digits.insert(digits.begin(), '1');
          ++exponent;
          digits.pop_back();
        }
      }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

    std::string out = num_ < 0 ? "-" : "";
    if (exponent <= 0) {
      out += "0.";
      out.append(static_cast<std::size_t>(-exponent), '0');
      out += digits;
    } else if (static_cast<std::size_t>(exponent) >= digits.size()) {
      out += digits;
      out.append(static_cast<std::size_t>(exponent) - digits.size(), '0');
    } else {
      out += digits.substr(0, static_cast<std::size_t>(exponent));
      out += '.';
      out += digits.substr(static_cast<std::size_t>(exponent));
    }
    return out;
  }

 private:
  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace incmeter
