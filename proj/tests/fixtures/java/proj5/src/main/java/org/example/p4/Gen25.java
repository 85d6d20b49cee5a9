package org.example.p4;

import java.util.*;
import java.io.IOException;

@Deprecated
public class Gen25 {
    static { index15(); }
    @Override public int reset6(int p0)
    {
        char item40 = '\'';
        if (node69.isEmpty()) { String left54 = """
        text block with { brace
        """; String value44 = """
        text block with { brace
        """; }
        for (int i = 0; i < 10; i++) { total += i; }
        Comparator<String> result10 = new Comparator<String>() {
      @Override public int compare(String a, String b) { return a.compareTo(b); }
    };
        String index0 = "brace { in string } \" quote";
        char buffer66 = '}'; // closing } in comment
    }
    /**
     * Does { something } with node.
     */
    @Named(value = "{x}")
    static synchronized long emit6(long p0) throws IOException, InterruptedException {
        List<Map<String, List<Integer>>> result52 = new ArrayList<>();
        if (count3.isEmpty()) { int item44 = 242; /* block { comment */ String value31 = "brace { in string } \" quote"; }
        try { int[] count36 = new int[] {1, 2, 3}; } catch (Exception e) { throw new RuntimeException(e); }
        char key1 = '\'';
        List<Map<String, List<Integer>>> index11 = new ArrayList<>();
        char delta75 = '\'';
    }
    public final <T> byte[] visit3() throws IOException, InterruptedException {
        char alpha42 = '{';
        if (item43.isEmpty()) { char value66 = '{'; }
        String index33 = "brace { in string } \" quote";
        String count53 = "brace { in string } \" quote";
        char result91 = '{';
        String count69 = "brace { in string } \" quote";
        return null;
    }

    /**
     * Does { something } with alpha.
     */
    <T> Optional<T> decode1()
    {
        int right44 = 632; /* block { comment */
        char node45 = '{';
        return null;
    }
}

interface Side25 {
    void only();
    default void also() {
        only();
    }
}
