#include "archmark/training_db.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "archmark/error.hpp"

namespace archmark {

using nlohmann::json;

const TypeReference* TrainingDatabase::find(const ToothType& type) const
{
    const auto it = types.find(type.reference_code());
    return it == types.end() ? nullptr : &it->second;
}

void TrainingDatabase::validate() const
{
    for (const auto& [code, ref] : types) {
        if (!(ref.prior >= 0.0 && ref.prior <= 1.0))
            throw Error(ErrorKind::invalid_input, "training database: prior of " + code + " outside [0,1]");
    }
    for (const auto& t : tooth_types(jaw_kind)) {
        const auto* ref = find(t);
        if (ref == nullptr)
            throw Error(ErrorKind::invalid_input, "training database: no entry for " + t.reference_code());
        for (const auto& [name, values] : ref->characteristics)
            if (values.size() < 2)
                throw Error(ErrorKind::invalid_input, "training database: " + t.reference_code() + "/" + name +
                                                          " has fewer than 2 reference values");
    }
}

std::string to_json(const TrainingDatabase& db)
{
    json types = json::object();
    for (const auto& [code, ref] : db.types) {
        json chars = json::object();
        for (const auto& [name, values] : ref.characteristics)
            chars[name] = values;
        types[code] = {{"characteristics", chars}, {"prior", ref.prior}};
    }
    json doc = {{"schema_version", TrainingDatabase::kSchemaVersion},
                {"jaw_kind", to_string(db.jaw_kind)},
                {"types", types}};
    return doc.dump(2) + "\n";
}

TrainingDatabase parse_training_db(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, std::string("training database: ") + e.what());
    }
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != TrainingDatabase::kSchemaVersion)
            throw Error(ErrorKind::parse, "training database: unsupported schema_version " + std::to_string(version));
        TrainingDatabase db;
        db.jaw_kind = parse_jaw_kind(doc.at("jaw_kind").get<std::string>());
        for (const auto& [code, entry] : doc.at("types").items()) {
            TypeReference ref;
            ref.prior = entry.at("prior").get<double>();
            for (const auto& [name, values] : entry.at("characteristics").items())
                ref.characteristics[name] = values.get<std::vector<double>>();
            db.types[code] = std::move(ref);
        }
        return db;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, std::string("training database: ") + e.what());
    }
}

TrainingDatabase load_training_db(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::parse, "cannot open training database " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_training_db(ss.str());
}

void save_training_db(const TrainingDatabase& db, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::invalid_input, "cannot write " + path.string());
    out << to_json(db);
}

TrainingDatabase build_training_db(JawKind kind, const std::vector<LabelledSample>& samples,
                                   const std::vector<SideObservation>& sides)
{
    TrainingDatabase db;
    db.jaw_kind = kind;
    std::set<std::string> known;
    for (const auto& t : tooth_types(kind)) {
        known.insert(t.reference_code());
        db.types[t.reference_code()];
    }
    for (const auto& s : samples) {
        const ToothType t = parse_tooth_code(s.code);
        if (!known.contains(t.reference_code()))
            continue;
        auto& ref = db.types[t.reference_code()];
        for (const auto& [name, value] : s.characteristics)
            ref.characteristics[name].push_back(value);
    }
    if (!sides.empty()) {
        std::map<std::string, std::size_t> counts;
        for (const auto& side : sides) {
            std::set<std::string> codes;
            for (const auto& c : side.present_codes)
                codes.insert(parse_tooth_code(c).reference_code());
            for (const auto& c : codes)
                ++counts[c];
        }
        for (auto& [code, ref] : db.types)
            ref.prior = static_cast<double>(counts[code]) / static_cast<double>(sides.size());
    }
    return db;
}

} // namespace archmark
