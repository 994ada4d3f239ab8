#include "corex/textprep.hpp"

namespace corex {

// Fixed, versioned lists. Changing them changes every downstream number,
// so treat edits as breaking.

const std::vector<std::string>& default_stopwords() {
    static const std::vector<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "also",
        "am", "an", "and", "any", "are", "as", "at", "be", "because", "been",
        "before", "being", "below", "between", "both", "but", "by", "can",
        "cannot", "could", "did", "do", "does", "doing", "down", "during",
        "each", "few", "for", "from", "further", "had", "has", "have",
        "having", "he", "her", "here", "hers", "herself", "him", "himself",
        "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself",
        "just", "may", "me", "might", "more", "most", "must", "my", "myself",
        "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
        "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
        "same", "shall", "she", "should", "so", "some", "such", "than",
        "that", "the", "their", "theirs", "them", "themselves", "then",
        "there", "these", "they", "this", "those", "through", "to", "too",
        "under", "until", "up", "upon", "very", "was", "we", "were", "what",
        "when", "where", "which", "while", "who", "whom", "why", "will",
        "with", "within", "would", "you", "your", "yours", "yourself",
        "yourselves"};
    return words;
}

const std::vector<std::string>& default_noninformative_words() {
    // Seeded from mission-statement boilerplate: mission(s), aim(s),
    // institution(s), university(ies), plus possessives and the near
    // synonyms institute/organization. Fully overridable per run.
    static const std::vector<std::string> words = {
        "aim", "aims", "institute", "institute's", "institutes",
        "institution", "institution's", "institutions", "mission",
        "mission's", "missions", "organisation", "organisations",
        "organization", "organizations", "university", "university's",
        "universities"};
    return words;
}

const std::vector<std::string>& default_abbreviations() {
    static const std::vector<std::string> abbrevs = {
        "adm.", "al.", "approx.", "apr.", "assn.", "aug.", "b.a.", "b.sc.",
        "bros.", "ca.", "capt.", "cf.", "co.", "col.", "corp.", "d.c.",
        "dec.", "dept.", "dr.", "e.g.", "e.u.", "ed.", "eds.", "est.",
        "etc.", "feb.", "fig.", "figs.", "fri.", "gen.", "gov.", "hon.",
        "i.e.", "inc.", "jan.", "jr.", "jul.", "jun.", "lt.", "ltd.",
        "m.a.", "m.b.a.", "m.d.", "m.sc.", "mar.", "mon.", "mr.", "mrs.",
        "ms.", "no.", "nos.", "nov.", "oct.", "ph.d.", "pres.", "prof.",
        "rep.", "rev.", "sat.", "sen.", "sep.", "sept.", "sgt.", "sr.",
        "st.", "sun.", "thu.", "tue.", "u.k.", "u.n.", "u.s.", "u.s.a.",
        "univ.", "viz.", "vol.", "vols.", "vs.", "wed."};
    return abbrevs;
}

} // namespace corex
