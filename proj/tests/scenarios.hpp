#pragma once

#include <string>
#include <vector>

namespace scenarios {

inline const char* kJockRule = "all(x)(JOCK(x) => ~SMART(x))";
inline const char* kFemaleRule = "all(x)(FEMALE(x) => ~SMART(x))";
inline const char* kGradRule = "all(x)(GRAD(x) => SMART(x))";
inline const char* kOldRule = "all(x)(OLD(x) => SMART(x))";
inline const char* kFran = "FEMALE(FRAN) and OLD(FRAN) and GRAD(FRAN) and JOCK(FRAN)";

/// The Fran knowledge base: source orders, four sourced rules, then Fran's
/// self-description with forward inference and its source.
inline std::vector<std::string> fran_lines()
{
    return {
        "GREATER(HOLYBOOK, PROF).",
        "GREATER(PROF, NERD).",
        "GREATER(NERD, SEXIST).",
        "GREATER(FRAN, NERD).",
        std::string(kJockRule) + ".",
        std::string("SOURCE(NERD, ") + kJockRule + ").",
        std::string(kFemaleRule) + ".",
        std::string("SOURCE(SEXIST, ") + kFemaleRule + ").",
        std::string(kGradRule) + ".",
        std::string("SOURCE(PROF, ") + kGradRule + ").",
        std::string(kOldRule) + ".",
        std::string("SOURCE(HOLYBOOK, ") + kOldRule + ").",
        std::string(kFran) + "!",
        std::string("SOURCE(FRAN, ") + kFran + ").",
    };
}

/// Two independent derivations of C against one of ~C.
inline std::vector<std::string> two_against_one_lines()
{
    return {
        "A(K).", "B(K).", "D(K).", "A(K) => C(K).", "B(K) => C(K).", "D(K) => ~C(K).", "C(K)?", "~C(K)?",
    };
}

}  // namespace scenarios
