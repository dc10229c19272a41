#include "betanorm/base.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "betanorm/detail/lattice.hpp"
#include "betanorm/error.hpp"
#include "betanorm/expansion.hpp"

namespace betanorm {

BaseSpec parse_base_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("base spec: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "base spec must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "minpoly" && key != "d" && key != "name") {
            throw Error(ErrorCode::ParseError, "base spec: unknown key '" + key + "'");
        }
    }
    if (!j.contains("minpoly") || !j["minpoly"].is_array()) {
        throw Error(ErrorCode::ParseError, "base spec: 'minpoly' must be an array");
    }
    if (!j.contains("d") || !j["d"].is_number_integer()) {
        throw Error(ErrorCode::ParseError, "base spec: 'd' must be an integer");
    }
    BaseSpec spec;
    for (const auto& c : j["minpoly"]) {
        if (c.is_number_integer()) {
            spec.minpoly.emplace_back(std::to_string(c.get<long long>()));
        } else if (c.is_string()) {
            try {
                spec.minpoly.emplace_back(c.get<std::string>());
            } catch (const std::invalid_argument&) {
                throw Error(ErrorCode::ParseError, "base spec: bad coefficient " + c.dump());
            }
        } else {
            throw Error(ErrorCode::ParseError, "base spec: bad coefficient " + c.dump());
        }
    }
    spec.d = j["d"].get<int>();
    return spec;
}

BaseSpec load_base_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read base file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_base_spec(ss.str());
}

std::string to_json(const BaseSpec& spec) {
    nlohmann::json j;
    j["minpoly"] = nlohmann::json::array();
    for (const auto& c : spec.minpoly) {
        if (c.fits_slong_p()) {
            j["minpoly"].push_back(c.get_si());
        } else {
            j["minpoly"].push_back(c.get_str());
        }
    }
    j["d"] = spec.d;
    return j.dump();
}

std::vector<long double> PisotBase::conjugate_moduli() const {
    std::vector<long double> out;
    for (const auto& disk : ctx_->conjugates()) out.push_back(disk.modulus_bound());
    return out;
}

BaseSpec PisotBase::spec() const {
    return BaseSpec{ctx_->poly().coeffs(), d_};
}

BasePtr make_base(const MinimalPolynomial& poly, int d) {
    auto ctx = FieldContext::create(poly);
    const FieldElement beta = FieldElement::beta(ctx);
    if (d < 2 || compare(beta, Rational(d)) != std::strong_ordering::less) {
        std::ostringstream os;
        os << "alphabet size " << d << " must exceed beta ~ " << static_cast<double>(ctx->beta_approx());
        throw Error(ErrorCode::AlphabetTooSmall, os.str());
    }
    std::shared_ptr<PisotBase> base(new PisotBase());
    base->ctx_ = ctx;
    base->d_ = d;
    base->digit_bound_ = static_cast<int>(floor(beta).get_si());
    base->c_ = (beta - Rational(1)) * Rational(1, d - 1);
    base->q_ = base->c_.denominator();
    base->quasi_greedy_ = quasi_greedy_one(ctx);
    base->lattice_ = std::make_shared<detail::Lattice>(ctx);
    return base;
}

BasePtr make_base(const BaseSpec& spec) {
    return make_base(MinimalPolynomial(spec.minpoly), spec.d);
}

}  // namespace betanorm
