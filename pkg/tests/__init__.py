# theta-iwasawa tests
