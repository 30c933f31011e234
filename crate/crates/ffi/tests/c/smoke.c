#include <stdio.h>
#include <string.h>
#include "dawk.h"

#define CHECK(x) do { if (!(x)) { fprintf(stderr, "failed: %s\n", #x); return 1; } } while (0)

int main(void) {
    DawkGroup *g = NULL;
    DawkElement *e = NULL, *inv = NULL, *prod = NULL;
    char *json = NULL;
    bool passed = false;

    CHECK(dawk_group_new("A2~1", &g) == DAWK_STATUS_OK);
    CHECK(dawk_group_rank(g) == 2);
    CHECK(dawk_element_from_word(g, "s01 s02 s1", &e) == DAWK_STATUS_OK);
    CHECK(dawk_element_inverse(g, e, &inv) == DAWK_STATUS_OK);
    CHECK(dawk_element_multiply(g, e, inv, &prod) == DAWK_STATUS_OK);
    CHECK(dawk_element_is_identity(prod) == 1);
    CHECK(dawk_element_to_json(e, &json) == DAWK_STATUS_OK);
    CHECK(strstr(json, "\"c\"") != NULL);
    dawk_string_free(json);

    DawkPresentation *p = NULL;
    CHECK(dawk_presentation_new(g, "daw", 1, &p) == DAWK_STATUS_OK);
    CHECK(dawk_verify(g, p, 1, &json, &passed) == DAWK_STATUS_OK);
    CHECK(passed);
    dawk_string_free(json);

    DawkGroup *bad = NULL;
    CHECK(dawk_group_new("X9~1", &bad) == DAWK_STATUS_UNKNOWN_TYPE);
    char *msg = dawk_last_error();
    CHECK(msg != NULL);
    dawk_string_free(msg);

    dawk_presentation_free(p);
    dawk_element_free(prod);
    dawk_element_free(inv);
    dawk_element_free(e);
    dawk_group_free(g);
    puts("ok");
    return 0;
}
