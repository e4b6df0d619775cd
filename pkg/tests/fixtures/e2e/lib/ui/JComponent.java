package ui;

public abstract class JComponent {
    public void paint() { }
    public void setVisible(boolean v) { }
}
