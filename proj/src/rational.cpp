#include "ergopt/rational.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ergopt {

namespace {

[[noreturn]] void bad_number(std::string_view text) {
    throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
}

}  // namespace

Rat rat_from_decimal(std::string_view text) {
    if (text.empty()) bad_number(text);

    if (text.find('/') != std::string_view::npos) {
        mpq_class q;
        if (mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0) bad_number(text);
        if (q.get_den() == 0) bad_number(text);
        q.canonicalize();
        return q;
    }

    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }

    std::string digits;
    long frac_digits = 0;
    bool any = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        digits += text[i];
        any = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            digits += text[i];
            ++frac_digits;
            any = true;
        }
    }
    if (!any) bad_number(text);

    long exp10 = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        if (i >= text.size()) bad_number(text);
        std::size_t exp_begin = i;
        if (text[i] == '+' || text[i] == '-') ++i;
        if (i >= text.size()) bad_number(text);
        for (std::size_t j = i; j < text.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(text[j]))) bad_number(text);
        exp10 = std::strtol(std::string(text.substr(exp_begin)).c_str(), nullptr, 10);
        i = text.size();
    }
    if (i != text.size()) bad_number(text);

    mpz_class num(digits.empty() ? "0" : digits, 10);
    if (negative) num = -num;

    long shift = exp10 - frac_digits;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));

    Rat result;
    if (shift >= 0) {
        result = Rat(num * pow10);
    } else {
        result = Rat(num, pow10);
    }
    result.canonicalize();
    return result;
}

Rat rat_from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("weight is not finite");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return rat_from_decimal(std::string_view(buf, res.ptr - buf));
}

std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double rat_to_double(const Rat& r) { return r.get_d(); }

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr - buf);
}

}  // namespace ergopt
