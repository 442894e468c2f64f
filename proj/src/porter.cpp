#include "sseatk/porter.hpp"

#include <cstddef>

namespace sseatk {
namespace {

// Working buffer: b holds the word, k is the index of its last letter.
struct Stem {
    std::string b;
    std::size_t k = 0;

    bool cons(std::size_t i) const {
        switch (b[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // Measure of the stem b[0..j]: the m in [C](VC)^m[V].
    std::size_t measure(std::size_t j) const {
        std::size_t n = 0;
        std::size_t i = 0;
        for (;;) {
            if (i > j) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    // *v* : stem b[0..j] contains a vowel.
    bool has_vowel(std::size_t j) const {
        for (std::size_t i = 0; i <= j; ++i)
            if (!cons(i)) return true;
        return false;
    }

    // *d : b[0..j] ends with a double consonant.
    bool double_cons(std::size_t j) const {
        if (j < 1) return false;
        return b[j] == b[j - 1] && cons(j);
    }

    // *o : b[0..i] ends consonant-vowel-consonant where the final consonant
    // is not w, x or y.
    bool cvc(std::size_t i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char c = b[i];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view s) {
        if (s.size() > k + 1) return false;
        return std::string_view(b).substr(k + 1 - s.size(), s.size()) == s;
    }

    // Replace the matched suffix (length len) by s; stem end is k - len.
    void set_to(std::size_t len, std::string_view s) {
        b.replace(k + 1 - len, len, s);
        k = k + s.size() - len;
    }

    // Suffix rule: if the word ends with `suf` and measure(stem) > m_gt,
    // replace it. Returns true when the suffix matched (rule consumed).
    // A suffix equal to the whole word leaves an empty stem with measure 0.
    bool rule(std::string_view suf, std::string_view rep, std::size_t m_gt) {
        if (!ends(suf)) return false;
        if (suf.size() > k) return true;
        std::size_t j = k - suf.size();
        if (measure(j) > m_gt) set_to(suf.size(), rep);
        return true;
    }

    void step1ab() {
        if (b[k] == 's') {
            if (ends("sses")) k -= 2;
            else if (ends("ies")) set_to(3, "i");
            else if (b[k - 1] != 's') --k;
        }
        if (ends("eed")) {
            if (k >= 3 && measure(k - 3) > 0) --k;
        } else if ((ends("ed") && k >= 2 && has_vowel(k - 2)) ||
                   (ends("ing") && k >= 3 && has_vowel(k - 3))) {
            k -= b[k] == 'd' ? 2 : 3;
            if (ends("at")) set_to(2, "ate");
            else if (ends("bl")) set_to(2, "ble");
            else if (ends("iz")) set_to(2, "ize");
            else if (double_cons(k)) {
                char c = b[k];
                if (c != 'l' && c != 's' && c != 'z') --k;
            } else if (measure(k) == 1 && cvc(k)) {
                set_to(0, "e");
            }
        }
    }

    void step1c() {
        if (ends("y") && k >= 1 && has_vowel(k - 1)) b[k] = 'i';
    }

    void step2() {
        switch (b[k - 1]) {
            case 'a':
                if (rule("ational", "ate", 0)) return;
                if (rule("tional", "tion", 0)) return;
                return;
            case 'c':
                if (rule("enci", "ence", 0)) return;
                if (rule("anci", "ance", 0)) return;
                return;
            case 'e':
                if (rule("izer", "ize", 0)) return;
                return;
            case 'l':
                if (rule("abli", "able", 0)) return;
                if (rule("alli", "al", 0)) return;
                if (rule("entli", "ent", 0)) return;
                if (rule("eli", "e", 0)) return;
                if (rule("ousli", "ous", 0)) return;
                return;
            case 'o':
                if (rule("ization", "ize", 0)) return;
                if (rule("ation", "ate", 0)) return;
                if (rule("ator", "ate", 0)) return;
                return;
            case 's':
                if (rule("alism", "al", 0)) return;
                if (rule("iveness", "ive", 0)) return;
                if (rule("fulness", "ful", 0)) return;
                if (rule("ousness", "ous", 0)) return;
                return;
            case 't':
                if (rule("aliti", "al", 0)) return;
                if (rule("iviti", "ive", 0)) return;
                if (rule("biliti", "ble", 0)) return;
                return;
            default:
                return;
        }
    }

    void step3() {
        switch (b[k]) {
            case 'e':
                if (rule("icate", "ic", 0)) return;
                if (rule("ative", "", 0)) return;
                if (rule("alize", "al", 0)) return;
                return;
            case 'i':
                if (rule("iciti", "ic", 0)) return;
                return;
            case 'l':
                if (rule("ical", "ic", 0)) return;
                if (rule("ful", "", 0)) return;
                return;
            case 's':
                if (rule("ness", "", 0)) return;
                return;
            default:
                return;
        }
    }

    bool step4_matches() {
        switch (b[k - 1]) {
            case 'a':
                return ends("al");
            case 'c':
                return ends("ance") || ends("ence");
            case 'e':
                return ends("er");
            case 'i':
                return ends("ic");
            case 'l':
                return ends("able") || ends("ible");
            case 'n':
                return ends("ant") || ends("ement") || ends("ment") || ends("ent");
            case 'o':
                return (ends("ion") && k >= 3 && (b[k - 3] == 's' || b[k - 3] == 't')) ||
                       ends("ou");
            case 's':
                return ends("ism");
            case 't':
                return ends("ate") || ends("iti");
            case 'u':
                return ends("ous");
            case 'v':
                return ends("ive");
            case 'z':
                return ends("ize");
            default:
                return false;
        }
    }

    void step4() {
        if (!step4_matches()) return;
        // A suffix matched; `ends` leaves its length implicit, so recompute.
        static constexpr std::string_view sufs[] = {
            "ement", "ance", "ence", "able", "ible", "ant", "ment", "ent",
            "ion",   "ism",  "ate",  "iti",  "ous",  "ive", "ize",  "al",
            "er",    "ic",   "ou"};
        for (auto s : sufs) {
            if (ends(s)) {
                if (s.size() > k) return;
                std::size_t j = k - s.size();
                if (measure(j) > 1) k = j;
                return;
            }
        }
    }

    void step5() {
        if (b[k] == 'e') {
            std::size_t m = measure(k - 1);
            if (m > 1 || (m == 1 && !cvc(k - 1))) --k;
        }
        if (b[k] == 'l' && double_cons(k) && measure(k - 1) > 1) --k;
    }
};

}  // namespace

std::string porter_stem(std::string_view word) {
    if (word.size() <= 2) return std::string(word);
    Stem s;
    s.b.assign(word);
    s.k = word.size() - 1;
    s.step1ab();
    if (s.k > 0) {
        s.step1c();
        s.step2();
        s.step3();
        s.step4();
        s.step5();
    }
    s.b.resize(s.k + 1);
    return s.b;
}

}  // namespace sseatk
