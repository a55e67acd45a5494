#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace archmark {

enum class Dentition { adult, deciduous };
enum class Jaw { upper, lower };

struct JawKind {
    Dentition dentition = Dentition::adult;
    Jaw jaw = Jaw::upper;

    bool operator==(const JawKind&) const = default;
};

/// "adult_upper", "adult_lower", "deciduous_upper", "deciduous_lower".
std::string to_string(JawKind kind);
JawKind parse_jaw_kind(std::string_view text);

enum class Side { left, right };
enum class MolarRole { none, whole, mesial_half, distal_half };
enum class ToothClass { incisor, canine, premolar, molar };

const char* to_string(ToothClass cls) noexcept;

/**
 * One searchable tooth type in Palmer notation, e.g. UR1, LL6.0, URE.1.
 * The .0 / .1 suffixes denote the mesial and distal halves of a molar.
 */
struct ToothType {
    std::string code;
    JawKind kind;
    Side side = Side::right;
    int ordinal = 1;       ///< position from the midline: 1..8, or A..E as 1..5
    MolarRole role = MolarRole::none;
    ToothClass tooth_class = ToothClass::incisor;

    /// Same type on the right side: left and right types share reference data.
    std::string reference_code() const;
    /// Code without a half suffix ("UR6.1" -> "UR6").
    std::string whole_code() const;
    bool is_half() const { return role == MolarRole::mesial_half || role == MolarRole::distal_half; }
};

/// Parses a Palmer code. Throws Error(invalid_input) on malformed codes.
ToothType parse_tooth_code(std::string_view code);

/**
 * Every type searched for in a jaw kind, ordered along the frame's +x
 * (right) axis. With occlusal as up, patient-right teeth of an upper jaw lie
 * on -x and patient-right teeth of a lower jaw lie on +x. Each molar's whole
 * and half types are contiguous, distal half outermost.
 */
std::vector<ToothType> tooth_types(JawKind kind);

/// Index triples (whole, mesial half, distal half) into a type list.
struct MolarGroup {
    std::size_t whole;
    std::size_t mesial;
    std::size_t distal;
};
std::vector<MolarGroup> molar_groups(const std::vector<ToothType>& types);

} // namespace archmark
