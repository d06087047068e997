#include "drinfeld/parsing.hpp"

#include "drinfeld/expr.hpp"

namespace drinfeld {

APoly parse_apoly(const FieldCtx* F, const std::string& s, std::size_t line, std::size_t col0) {
    ExprRing<APoly> R;
    R.integer = [F](long long n) { return APoly::constant(F, F->from_int(n)); };
    R.variable = [F](const std::string& name) -> std::optional<APoly> {
        if (name == "T") return APoly::T(F);
        if (name == "g") return APoly::constant(F, F->gen());
        return std::nullopt;
    };
    R.add = [](const APoly& a, const APoly& b) { return a + b; };
    R.sub = [](const APoly& a, const APoly& b) { return a - b; };
    R.mul = [](const APoly& a, const APoly& b) { return a * b; };
    R.div = [](const APoly& a, const APoly& b) { return a / b; };
    R.neg = [](const APoly& a) { return -a; };
    R.power = [](const APoly& a, long long n) {
        if (n < 0) {
            if (a.deg() != 0) throw PreconditionError("negative power of a non-constant polynomial");
            return a.inv().pow(static_cast<std::uint64_t>(-n));
        }
        return a.pow(static_cast<std::uint64_t>(n));
    };
    return parse_expr(s, R, line, col0);
}

RatFunc parse_ratfunc(const FieldCtx* F, const std::string& s, std::size_t line, std::size_t col0) {
    ExprRing<RatFunc> R;
    R.integer = [F](long long n) { return RatFunc(APoly::constant(F, F->from_int(n))); };
    R.variable = [F](const std::string& name) -> std::optional<RatFunc> {
        if (name == "T") return RatFunc(APoly::T(F));
        if (name == "g") return RatFunc(APoly::constant(F, F->gen()));
        return std::nullopt;
    };
    R.add = [](const RatFunc& a, const RatFunc& b) { return a + b; };
    R.sub = [](const RatFunc& a, const RatFunc& b) { return a - b; };
    R.mul = [](const RatFunc& a, const RatFunc& b) { return a * b; };
    R.div = [](const RatFunc& a, const RatFunc& b) { return a / b; };
    R.neg = [](const RatFunc& a) { return -a; };
    R.power = [](const RatFunc& a, long long n) { return a.pow(n); };
    return parse_expr(s, R, line, col0);
}

LocalElem parse_local(const LocalRing* Rg, const std::string& s, int prec, std::size_t line, std::size_t col0) {
    const FieldCtx* F = Rg->F.get();
    ExprRing<LocalElem> R;
    R.integer = [Rg, F](long long n) { return LocalElem::constant(Rg, F->from_int(n)); };
    R.variable = [Rg, F](const std::string& name) -> std::optional<LocalElem> {
        if (name == "pi") return LocalElem::pi_pow(Rg, 1);
        if (name == "w") return LocalElem::w_pow(Rg, 1);
        if (name == "g") return LocalElem::constant(Rg, F->gen());
        return std::nullopt;
    };
    R.add = [](const LocalElem& a, const LocalElem& b) { return a + b; };
    R.sub = [](const LocalElem& a, const LocalElem& b) { return a - b; };
    R.mul = [](const LocalElem& a, const LocalElem& b) { return a * b; };
    R.div = [](const LocalElem& a, const LocalElem& b) { return a / b; };
    R.neg = [](const LocalElem& a) { return -a; };
    R.power = [](const LocalElem& a, long long n) { return a.pow(n); };
    return parse_expr(s, R, line, col0).truncate(prec);
}

}  // namespace drinfeld
