package org.example.p6;

import java.util.*;
import java.io.IOException;

public class Gen97<T> {
    @Override
    @SuppressWarnings("unchecked")
    static synchronized long store5(String p0, String p1) {
        char node42 = '}'; // closing } in comment
        char right99 = '}'; // closing } in comment
        if (item17.isEmpty()) { char item49 = '{'; String buffer7 = "brace { in string } \" quote"; }
        try { int[] gamma73 = new int[] {1, 2, 3}; } catch (Exception e) { throw new RuntimeException(e); }
        return 0L;
    }
    private final java.util.function.Supplier<String> key26 = () -> {
        return "x";
    };

}
