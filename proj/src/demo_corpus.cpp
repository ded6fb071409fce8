#include "sls/markov.hpp"

namespace sls {

std::string_view demo_corpus() {
    static constexpr std::string_view kText =
        "The lighthouse keeper kept a ledger of every ship that passed the northern point. On "
        "March 3rd, 1887, he wrote: \"Fog at dawn; wind from the west at 12 knots; the schooner "
        "Margaret Quill rounded the rocks at 7:40 and signalled twice.\" Nobody knows why she "
        "signalled, or to whom. The keeper (a careful man named Josiah Vane) added a question mark "
        "and nothing more.\n"
        "Years later his granddaughter found the ledger in a trunk beneath the stairs. She counted "
        "4,316 entries across 29 years, each one in the same square hand. Some were brief: \"Calm.\" "
        "Others ran for half a page, describing gulls, lamps, oil deliveries, and the price of "
        "kerosene (which rose from 9 cents to 14 cents a gallon). She read them all over one long "
        "winter, with a pot of tea and a lamp of her own.\n"
        "What puzzled her most was a column of numbers on the last page: 2, 3, 5, 7, 11, 13, 17, 19, "
        "23. Prime numbers, she realised, though Josiah had never mentioned mathematics anywhere "
        "else. Was it a code? A game to pass the hours? Or just a quiet habit of a quiet mind?\n"
        "She asked the librarian in Port Ellery, who said: \"Keepers had time, and time makes "
        "people curious.\" She asked the harbour master, who laughed and said the old man probably "
        "counted herring. She asked her mother, who only shrugged.\n"
        "In the end she copied the numbers onto a card and pinned it above her desk. Every morning "
        "she looked at it before work. Every morning it asked the same thing: what do you notice "
        "when nobody is watching? Zero answers came, and yet the question kept her company.\n"
        "Today the lighthouse is automated. A small box of electronics blinks where Josiah once "
        "trimmed the wick, and the keeper's cottage rents for $85 a night to visitors who want the "
        "sound of the sea. Guests leave notes in a new ledger by the door. Most write about the "
        "view; a few write about the weather; one child drew a whale with 6 fins and signed it "
        "\"Quentin, age 8\". Every so often someone writes a short list of prime numbers, and "
        "nobody ever explains it.\n"
        "Keep a ledger, the granddaughter tells her students now. Write down the wind, the boats, the "
        "small odd things. You will not know which line matters until years have passed; perhaps "
        "none will, and that is fine too. Jot the date, the hour, the sky. Quiet work, done daily, "
        "becomes a kind of company.\n";
    return kText;
}

} // namespace sls
