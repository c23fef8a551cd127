package fix;

public class Tricky {

    // a comment with a brace { that should not count
    public String render() {
        String s = "{";
        String t = "}}}";
        char c = '{';
        /* block comment { with } braces */
        for (int i = 0; i < 3; i++) {
            s = s + t + c;
        }
        return s;
    }
}
