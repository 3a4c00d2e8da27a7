#include <bts/symbol.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using bts::SymbolExpr;
using bts::eval_symbol;
using bts::parse_symbol;
using bts::print_symbol;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(ParseSymbol, TrigPolynomialMapsToSumOfScaledCos) {
    const SymbolExpr expected =
        SymbolExpr::sum({SymbolExpr::constant(3.0), SymbolExpr::scale(-4.0, SymbolExpr::cos_harmonic(1))});
    EXPECT_EQ(parse_symbol("3-4*cos(t)"), expected);
}

TEST(ParseSymbol, SqrtDesugarsToHalfPower) {
    EXPECT_EQ(parse_symbol("sqrt(abs(t))"), SymbolExpr::pow(SymbolExpr::abs(SymbolExpr::theta()), 0.5));
}

TEST(ParseSymbol, IndicatorWrapsPrecedingFactor) {
    EXPECT_EQ(parse_symbol("t*ind(0,pi)"), SymbolExpr::indicator(0.0, kPi, SymbolExpr::theta()));
}

TEST(ParseSymbol, HarmonicMultiplier) {
    EXPECT_EQ(parse_symbol("cos(2*t)"), SymbolExpr::cos_harmonic(2));
    EXPECT_EQ(parse_symbol("sin(3*t)"), SymbolExpr::sin_harmonic(3));
}

TEST(ParseSymbol, ConstantsFold) {
    EXPECT_EQ(parse_symbol("2*3+1"), SymbolExpr::constant(7.0));
    EXPECT_EQ(parse_symbol("pi/2"), SymbolExpr::constant(kPi / 2));
    EXPECT_EQ(parse_symbol("sqrt(4)"), SymbolExpr::constant(2.0));
}

TEST(ParseSymbol, PaperSymbolsParse) {
    for (const char* text : {"3-4*cos(t)", "4-cos(t)-2*cos(2*t)", "t^2+1", "t-5", "-t^4", "2-2*cos(t)", "t^2",
                             "1", "t+4", "abs(t)", "sqrt(abs(t))", "t*ind(0,pi)"})
        EXPECT_NO_THROW(parse_symbol(text)) << text;
}

TEST(ParseSymbol, SyntaxErrorCarriesOffset) {
    try {
        parse_symbol("3-4*cos(t");
        FAIL() << "expected a syntax error";
    } catch (const bts::SymbolSyntaxError& e) {
        EXPECT_EQ(e.offset(), 9u);
    }
    EXPECT_THROW(parse_symbol("3 $ t"), bts::SymbolSyntaxError);
    EXPECT_THROW(parse_symbol(""), bts::SymbolSyntaxError);
    EXPECT_THROW(parse_symbol("foo(t)"), bts::SymbolSyntaxError);
    EXPECT_THROW(parse_symbol("t/0"), bts::SymbolSyntaxError);
}

TEST(ParseSymbol, NonIntegerHarmonicRejected) {
    EXPECT_THROW(parse_symbol("cos(1.5*t)"), bts::SymbolSyntaxError);
    EXPECT_THROW(parse_symbol("cos(t^2)"), bts::SymbolSyntaxError);
}

TEST(ParseSymbol, IndicatorBoundsChecked) {
    EXPECT_THROW(parse_symbol("t*ind(0,4)"), bts::SymbolSyntaxError);
    EXPECT_THROW(parse_symbol("t*ind(1,0)"), bts::SymbolSyntaxError);
    EXPECT_THROW(parse_symbol("t*ind(t,1)"), bts::SymbolSyntaxError);
}

TEST(EvalSymbol, Examples) {
    EXPECT_DOUBLE_EQ(eval_symbol(parse_symbol("3-4*cos(t)"), 0.0), -1.0);
    EXPECT_EQ(eval_symbol(parse_symbol("t*ind(0,pi)"), -1.0), 0.0);
    EXPECT_NEAR(eval_symbol(parse_symbol("abs(t)^0.5"), kPi), 1.7724539, 1e-7);
    EXPECT_DOUBLE_EQ(eval_symbol(parse_symbol("t*ind(0,pi)"), 2.0), 2.0);
    EXPECT_DOUBLE_EQ(eval_symbol(parse_symbol("sin(2*t)"), kPi / 4), 1.0);
}

TEST(EvalSymbol, IndicatorIsClosedInterval) {
    const SymbolExpr e = parse_symbol("1*ind(0,1)+t*ind(-1,0)");
    EXPECT_EQ(eval_symbol(e, 0.0), 1.0);
    EXPECT_EQ(eval_symbol(e, 1.0), 1.0);
    EXPECT_EQ(eval_symbol(e, -1.0), -1.0);
}

TEST(EvalSymbol, DomainErrors) {
    EXPECT_THROW(eval_symbol(parse_symbol("t^0.5"), -1.0), bts::EvaluationError);
    EXPECT_THROW(eval_symbol(parse_symbol("t^-1"), 0.0), bts::EvaluationError);
    EXPECT_THROW(eval_symbol(parse_symbol("t"), 4.0), bts::ValidationError);
    EXPECT_NO_THROW(eval_symbol(parse_symbol("t^2"), -1.0));
}

TEST(PrintSymbol, PaperSymbolsRoundTrip) {
    for (const char* text : {"3-4*cos(t)", "4-cos(t)-2*cos(2*t)", "t^2+1", "t-5", "-t^4", "2-2*cos(t)",
                             "sqrt(abs(t))", "t*ind(0,pi)", "(t+1)*(t-1)/abs(t+2)", "2*(t*ind(-1,1))"}) {
        const SymbolExpr e = parse_symbol(text);
        EXPECT_EQ(parse_symbol(print_symbol(e)), e) << text << " -> " << print_symbol(e);
    }
}

namespace {

// Random trees in the normal form the parser produces, so that
// parse(print(a)) must reproduce a exactly.
class TreeGenerator {
public:
    explicit TreeGenerator(unsigned seed) : rng_(seed) {}

    SymbolExpr any(int depth) {
        if (depth <= 0) return leaf();
        switch (pick(7)) {
            case 0:
                return leaf();
            case 1:
                return SymbolExpr::abs(non_constant(depth - 1));
            case 2:
                return SymbolExpr::pow(pow_base(depth - 1), choose({2.0, 3.0, -1.0, 0.5, 1.5, -2.0}));
            case 3:
                return sum(depth - 1);
            case 4:
                return product(depth - 1);
            case 5:
                return SymbolExpr::scale(coefficient(), scale_child(depth - 1));
            default:
                return indicator(depth - 1);
        }
    }

private:
    std::mt19937 rng_;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    double choose(std::vector<double> options) { return options[static_cast<std::size_t>(pick(static_cast<int>(options.size())))]; }
    double coefficient() { return choose({2.0, -3.0, 0.25, 1.5, -1.0, -0.5, 7.0}); }

    SymbolExpr leaf() {
        switch (pick(3)) {
            case 0:
                return SymbolExpr::theta();
            case 1:
                return SymbolExpr::cos_harmonic(1 + pick(4));
            default:
                return SymbolExpr::sin_harmonic(1 + pick(4));
        }
    }

    SymbolExpr non_constant(int depth) { return any(depth); }

    SymbolExpr pow_base(int depth) {
        // sqrt(x)^p would re-parse as a Pow of a Pow, which is fine; constants would fold.
        return any(depth);
    }

    SymbolExpr scale_child(int depth) {
        for (;;) {
            SymbolExpr e = any(depth);
            if (!e.as<bts::expr::Scale>()) return e;
        }
    }

    SymbolExpr product_factor(int depth) {
        for (;;) {
            SymbolExpr e = any(depth);
            if (!e.as<bts::expr::Scale>()) return e;
        }
    }

    SymbolExpr sum(int depth) {
        std::vector<SymbolExpr> terms;
        const int count = 2 + pick(2);
        for (int i = 0; i < count; ++i) terms.push_back(pick(4) == 0 ? SymbolExpr::constant(coefficient()) : any(depth));
        terms.push_back(any(depth));
        return SymbolExpr::sum(std::move(terms));
    }

    SymbolExpr product(int depth) {
        std::vector<SymbolExpr> factors;
        const int count = 2 + pick(2);
        for (int i = 0; i < count; ++i) factors.push_back(product_factor(depth));
        return SymbolExpr::product(std::move(factors));
    }

    SymbolExpr indicator(int depth) {
        const double lo = choose({-3.0, -1.5, -0.5, 0.0});
        const double hi = choose({0.0, 0.5, 1.0, 2.5, 3.0});
        SymbolExpr operand = pick(5) == 0 ? SymbolExpr::constant(coefficient()) : any(depth);
        return SymbolExpr::indicator(lo, hi, std::move(operand));
    }
};

}  // namespace

TEST(PrintSymbol, RandomTreesRoundTrip) {
    TreeGenerator gen(20240601u);
    for (int i = 0; i < 500; ++i) {
        const SymbolExpr a = gen.any(1 + i % 4);
        const std::string text = print_symbol(a);
        SymbolExpr b = SymbolExpr::constant(0.0);
        ASSERT_NO_THROW(b = parse_symbol(text)) << text;
        EXPECT_EQ(b, a) << "#" << i << ": " << text << " reprinted as " << print_symbol(b);
    }
}

TEST(HasIndicator, DetectsNestedIndicators) {
    EXPECT_TRUE(bts::has_indicator(parse_symbol("1+abs(t*ind(0,1))")));
    EXPECT_FALSE(bts::has_indicator(parse_symbol("t^2+1")));
}
