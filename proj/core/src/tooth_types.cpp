#include "archmark/tooth_types.hpp"

#include <algorithm>
#include <map>

#include "archmark/error.hpp"

namespace archmark {

std::string to_string(JawKind kind)
{
    std::string s = kind.dentition == Dentition::adult ? "adult_" : "deciduous_";
    s += kind.jaw == Jaw::upper ? "upper" : "lower";
    return s;
}

JawKind parse_jaw_kind(std::string_view text)
{
    if (text == "adult_upper")
        return {Dentition::adult, Jaw::upper};
    if (text == "adult_lower")
        return {Dentition::adult, Jaw::lower};
    if (text == "deciduous_upper")
        return {Dentition::deciduous, Jaw::upper};
    if (text == "deciduous_lower")
        return {Dentition::deciduous, Jaw::lower};
    throw Error(ErrorKind::invalid_input, "unknown jaw kind '" + std::string(text) + "'");
}

const char* to_string(ToothClass cls) noexcept
{
    switch (cls) {
    case ToothClass::incisor: return "incisor";
    case ToothClass::canine: return "canine";
    case ToothClass::premolar: return "premolar";
    case ToothClass::molar: return "molar";
    }
    return "unknown";
}

std::string ToothType::reference_code() const
{
    std::string c = code;
    c[1] = 'R';
    return c;
}

std::string ToothType::whole_code() const
{
    const auto dot = code.find('.');
    return dot == std::string::npos ? code : code.substr(0, dot);
}

namespace {

ToothClass classify(Dentition d, int ordinal)
{
    if (d == Dentition::adult) {
        if (ordinal <= 2)
            return ToothClass::incisor;
        if (ordinal == 3)
            return ToothClass::canine;
        if (ordinal <= 5)
            return ToothClass::premolar;
        return ToothClass::molar;
    }
    if (ordinal <= 2)
        return ToothClass::incisor;
    if (ordinal == 3)
        return ToothClass::canine;
    return ToothClass::molar;
}

bool has_halves(Dentition d, int ordinal) { return d == Dentition::adult ? ordinal >= 6 : ordinal == 5; }

} // namespace

ToothType parse_tooth_code(std::string_view code)
{
    auto bad = [&] { return Error(ErrorKind::invalid_input, "malformed tooth code '" + std::string(code) + "'"); };
    if (code.size() != 3 && code.size() != 5)
        throw bad();
    ToothType t;
    t.code = std::string(code);
    if (code[0] != 'U' && code[0] != 'L')
        throw bad();
    if (code[1] != 'R' && code[1] != 'L')
        throw bad();
    t.kind.jaw = code[0] == 'U' ? Jaw::upper : Jaw::lower;
    t.side = code[1] == 'R' ? Side::right : Side::left;
    const char c = code[2];
    if (c >= '1' && c <= '8') {
        t.kind.dentition = Dentition::adult;
        t.ordinal = c - '0';
    } else if (c >= 'A' && c <= 'E') {
        t.kind.dentition = Dentition::deciduous;
        t.ordinal = c - 'A' + 1;
    } else {
        throw bad();
    }
    t.tooth_class = classify(t.kind.dentition, t.ordinal);
    if (code.size() == 5) {
        if (code[3] != '.' || (code[4] != '0' && code[4] != '1') || !has_halves(t.kind.dentition, t.ordinal))
            throw bad();
        t.role = code[4] == '0' ? MolarRole::mesial_half : MolarRole::distal_half;
    } else {
        t.role = has_halves(t.kind.dentition, t.ordinal) ? MolarRole::whole : MolarRole::none;
    }
    return t;
}

std::vector<ToothType> tooth_types(JawKind kind)
{
    const char jaw = kind.jaw == Jaw::upper ? 'U' : 'L';
    const int count = kind.dentition == Dentition::adult ? 8 : 5;
    auto tooth_char = [&](int ordinal) {
        return kind.dentition == Dentition::adult ? static_cast<char>('0' + ordinal) : static_cast<char>('A' + ordinal - 1);
    };

    // Types of one quadrant from the midline outwards, halves in
    // mesial / whole / distal order.
    auto quadrant = [&](char side) {
        std::vector<std::string> codes;
        for (int o = 1; o <= count; ++o) {
            const std::string base{jaw, side, tooth_char(o)};
            if (has_halves(kind.dentition, o)) {
                codes.push_back(base + ".0");
                codes.push_back(base);
                codes.push_back(base + ".1");
            } else {
                codes.push_back(base);
            }
        }
        return codes;
    };

    const char minus_side = kind.jaw == Jaw::upper ? 'R' : 'L';
    const char plus_side = kind.jaw == Jaw::upper ? 'L' : 'R';
    auto neg = quadrant(minus_side);
    auto pos = quadrant(plus_side);

    std::vector<ToothType> out;
    for (auto it = neg.rbegin(); it != neg.rend(); ++it)
        out.push_back(parse_tooth_code(*it));
    for (const auto& c : pos)
        out.push_back(parse_tooth_code(c));
    return out;
}

std::vector<MolarGroup> molar_groups(const std::vector<ToothType>& types)
{
    std::map<std::string, MolarGroup> groups;
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < types.size(); ++i) {
        const auto& t = types[i];
        if (t.role == MolarRole::none)
            continue;
        auto& g = groups[t.whole_code()];
        if (t.role == MolarRole::whole)
            g.whole = i;
        else if (t.role == MolarRole::mesial_half)
            g.mesial = i;
        else
            g.distal = i;
        ++seen[t.whole_code()];
    }
    std::vector<MolarGroup> out;
    for (const auto& [code, g] : groups)
        if (seen[code] == 3)
            out.push_back(g);
    std::sort(out.begin(), out.end(), [](const MolarGroup& a, const MolarGroup& b) { return a.whole < b.whole; });
    return out;
}

} // namespace archmark
