#pragma once

#include <numeric>
#include <string>

#include "sepchain/errors.hpp"

namespace sepchain {

// positive rational k = num/den in lowest terms
struct RationalParam {
    int num = 1;
    int den = 1;

    RationalParam() = default;
    RationalParam(int n, int d) : num(n), den(d) { validate(); }

    void validate() const {
        if (num < 1 || den < 1)
            throw ConfigError("rational parameter must have positive numerator and denominator, got " +
                              std::to_string(num) + "/" + std::to_string(den));
        if (std::gcd(num, den) != 1)
            throw ConfigError("rational parameter " + std::to_string(num) + "/" + std::to_string(den) +
                              " is not in lowest terms");
    }

    double value() const { return static_cast<double>(num) / den; }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    // parses "p/q" or "p"
    static RationalParam parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return RationalParam(std::stoi(s), 1);
            return RationalParam(std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1)));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("cannot parse rational parameter '" + s + "'");
        }
    }

    bool operator==(const RationalParam&) const = default;
};

}  // namespace sepchain
